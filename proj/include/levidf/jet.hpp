#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace levidf {

// Raised when a differentiation rule is evaluated outside its domain
// (log of a non-positive value, division by zero, ...). Carries the
// offending operation and the value it saw.
class DiffDomainError : public std::runtime_error {
 public:
  DiffDomainError(std::string op, double value)
      : std::runtime_error("differentiation domain error: '" + op +
                           "' at value " + std::to_string(value)),
        op_(std::move(op)),
        value_(value) {}

  const std::string& op() const { return op_; }
  double value() const { return value_; }

 private:
  std::string op_;
  double value_;
};

/// Second-order forward-mode jet over m real coordinates: value, gradient and
/// dense Hessian of second partials. Every propagation rule below is assembled
/// from exactly symmetric terms, so the Hessian stays bit-exactly symmetric.
///
/// Instances are immutable in practice: all operations return fresh jets and
/// never mutate their inputs, so jets can be evaluated from many threads.
class Jet {
 public:
  double value = 0.0;
  Eigen::VectorXd grad;   // size m
  Eigen::MatrixXd hess;   // m x m, symmetric

  Jet() = default;

  static Jet constant(double v, Eigen::Index dim) {
    Jet j;
    j.value = v;
    j.grad = Eigen::VectorXd::Zero(dim);
    j.hess = Eigen::MatrixXd::Zero(dim, dim);
    return j;
  }

  /// Jet of the coordinate function x_index at `point`.
  static Jet seed(const Eigen::VectorXd& point, Eigen::Index index) {
    if (index < 0 || index >= point.size())
      throw std::out_of_range("Jet::seed: coordinate index " +
                              std::to_string(index) + " out of range for dimension " +
                              std::to_string(point.size()));
    Jet j = constant(point[index], point.size());
    j.grad[index] = 1.0;
    return j;
  }

  Eigen::Index dim() const { return grad.size(); }
};

namespace detail {
inline void require_same_dim(const Jet& a, const Jet& b, const char* op) {
  if (a.dim() != b.dim())
    throw std::invalid_argument(std::string("jet dimension mismatch in '") + op + "': " +
                                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}
}  // namespace detail

inline Jet operator+(const Jet& a, const Jet& b) {
  detail::require_same_dim(a, b, "+");
  Jet r;
  r.value = a.value + b.value;
  r.grad = a.grad + b.grad;
  r.hess = a.hess + b.hess;
  return r;
}

inline Jet operator-(const Jet& a, const Jet& b) {
  detail::require_same_dim(a, b, "-");
  Jet r;
  r.value = a.value - b.value;
  r.grad = a.grad - b.grad;
  r.hess = a.hess - b.hess;
  return r;
}

inline Jet operator-(const Jet& a) {
  Jet r;
  r.value = -a.value;
  r.grad = -a.grad;
  r.hess = -a.hess;
  return r;
}

inline Jet operator*(const Jet& a, const Jet& b) {
  detail::require_same_dim(a, b, "*");
  Jet r;
  r.value = a.value * b.value;
  r.grad = b.value * a.grad + a.value * b.grad;
  r.hess = b.value * a.hess + a.value * b.hess + a.grad * b.grad.transpose() +
           b.grad * a.grad.transpose();
  return r;
}

inline Jet operator/(const Jet& a, const Jet& b) {
  detail::require_same_dim(a, b, "/");
  if (b.value == 0.0) throw DiffDomainError("div", 0.0);
  Jet r;
  r.value = a.value / b.value;
  r.grad = (a.grad - r.value * b.grad) / b.value;
  r.hess = (a.hess - r.value * b.hess - r.grad * b.grad.transpose() -
            b.grad * r.grad.transpose()) /
           b.value;
  return r;
}

inline Jet operator+(const Jet& a, double c) {
  Jet r = a;
  r.value += c;
  return r;
}
inline Jet operator+(double c, const Jet& a) { return a + c; }

inline Jet operator-(const Jet& a, double c) {
  Jet r = a;
  r.value -= c;
  return r;
}
inline Jet operator-(double c, const Jet& a) { return -(a - c); }

inline Jet operator*(const Jet& a, double c) {
  Jet r;
  r.value = a.value * c;
  r.grad = a.grad * c;
  r.hess = a.hess * c;
  return r;
}
inline Jet operator*(double c, const Jet& a) { return a * c; }

inline Jet operator/(const Jet& a, double c) {
  if (c == 0.0) throw DiffDomainError("div", 0.0);
  Jet r;
  r.value = a.value / c;
  r.grad = a.grad / c;
  r.hess = a.hess / c;
  return r;
}
inline Jet operator/(double c, const Jet& a) {
  return Jet::constant(c, a.dim()) / a;
}

namespace detail {

// u -> f(u) with f' and f'' supplied at u = a.value.
inline Jet unary_chain(const Jet& a, double f, double df, double ddf) {
  Jet r;
  r.value = f;
  r.grad = df * a.grad;
  r.hess = df * a.hess + ddf * (a.grad * a.grad.transpose());
  return r;
}

// (a, b) -> f(a, b) with all first and second partials supplied.
inline Jet binary_chain(const Jet& a, const Jet& b, double f, double fa, double fb,
                        double faa, double fab, double fbb) {
  require_same_dim(a, b, "binary_chain");
  Jet r;
  r.value = f;
  r.grad = fa * a.grad + fb * b.grad;
  r.hess = fa * a.hess + fb * b.hess + faa * (a.grad * a.grad.transpose()) +
           fbb * (b.grad * b.grad.transpose()) +
           fab * (a.grad * b.grad.transpose() + b.grad * a.grad.transpose());
  return r;
}

}  // namespace detail

inline Jet jexp(const Jet& a) {
  const double e = std::exp(a.value);
  return detail::unary_chain(a, e, e, e);
}

inline Jet jlog(const Jet& a) {
  if (a.value <= 0.0) throw DiffDomainError("log", a.value);
  const double inv = 1.0 / a.value;
  return detail::unary_chain(a, std::log(a.value), inv, -inv * inv);
}

inline Jet jsqrt(const Jet& a) {
  if (a.value <= 0.0) throw DiffDomainError("sqrt", a.value);
  const double s = std::sqrt(a.value);
  return detail::unary_chain(a, s, 0.5 / s, -0.25 / (a.value * s));
}

inline Jet jsin(const Jet& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return detail::unary_chain(a, s, c, -s);
}

inline Jet jcos(const Jet& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return detail::unary_chain(a, c, -s, -c);
}

/// u -> u^r for a real constant exponent. Integer exponents are valid for any
/// base where the result is finite; non-integer exponents require u > 0.
inline Jet jpow(const Jet& a, double r) {
  if (r == 0.0) return Jet::constant(1.0, a.dim());
  if (r == 1.0) return a;
  const bool integral = (r == std::nearbyint(r)) && std::abs(r) < 1e15;
  const double u = a.value;
  if (!integral && u <= 0.0) throw DiffDomainError("pow_real", u);
  if (integral && u == 0.0 && r < 2.0) throw DiffDomainError("pow_real", u);
  const double f = std::pow(u, r);
  const double df = r * std::pow(u, r - 1.0);
  const double ddf = r * (r - 1.0) * std::pow(u, r - 2.0);
  return detail::unary_chain(a, f, df, ddf);
}

inline Jet jatan2(const Jet& y, const Jet& x) {
  const double q = x.value * x.value + y.value * y.value;
  if (q == 0.0) throw DiffDomainError("atan2", 0.0);
  const double f = std::atan2(y.value, x.value);
  const double fy = x.value / q;
  const double fx = -y.value / q;
  const double q2 = q * q;
  const double fyy = -2.0 * x.value * y.value / q2;
  const double fxx = 2.0 * x.value * y.value / q2;
  const double fxy = (y.value * y.value - x.value * x.value) / q2;
  return detail::binary_chain(y, x, f, fy, fx, fyy, fxy, fxx);
}

/// First-order tangent layer with K independent tangents over a Jet base.
/// Composing TJet<K> over leaf-variable jets yields the mixed third-order
/// derivatives of composites (second order in the leaves, first order in the
/// tangent directions) while keeping every stored object second-order.
template <int K>
struct TJet {
  Jet val;
  std::array<Jet, K> d;

  static TJet constant(double v, Eigen::Index dim) {
    TJet t;
    t.val = Jet::constant(v, dim);
    for (auto& dk : t.d) dk = Jet::constant(0.0, dim);
    return t;
  }
};

template <int K>
inline TJet<K> operator+(const TJet<K>& a, const TJet<K>& b) {
  TJet<K> r;
  r.val = a.val + b.val;
  for (int k = 0; k < K; ++k) r.d[k] = a.d[k] + b.d[k];
  return r;
}

template <int K>
inline TJet<K> operator-(const TJet<K>& a, const TJet<K>& b) {
  TJet<K> r;
  r.val = a.val - b.val;
  for (int k = 0; k < K; ++k) r.d[k] = a.d[k] - b.d[k];
  return r;
}

template <int K>
inline TJet<K> operator-(const TJet<K>& a) {
  TJet<K> r;
  r.val = -a.val;
  for (int k = 0; k < K; ++k) r.d[k] = -a.d[k];
  return r;
}

template <int K>
inline TJet<K> operator*(const TJet<K>& a, const TJet<K>& b) {
  TJet<K> r;
  r.val = a.val * b.val;
  for (int k = 0; k < K; ++k) r.d[k] = a.val * b.d[k] + a.d[k] * b.val;
  return r;
}

template <int K>
inline TJet<K> operator/(const TJet<K>& a, const TJet<K>& b) {
  TJet<K> r;
  r.val = a.val / b.val;
  for (int k = 0; k < K; ++k) r.d[k] = (a.d[k] - r.val * b.d[k]) / b.val;
  return r;
}

template <int K>
inline TJet<K> operator+(const TJet<K>& a, double c) {
  TJet<K> r = a;
  r.val = r.val + c;
  return r;
}
template <int K>
inline TJet<K> operator+(double c, const TJet<K>& a) { return a + c; }
template <int K>
inline TJet<K> operator-(const TJet<K>& a, double c) {
  TJet<K> r = a;
  r.val = r.val - c;
  return r;
}
template <int K>
inline TJet<K> operator-(double c, const TJet<K>& a) { return -(a - c); }
template <int K>
inline TJet<K> operator*(const TJet<K>& a, double c) {
  TJet<K> r;
  r.val = a.val * c;
  for (int k = 0; k < K; ++k) r.d[k] = a.d[k] * c;
  return r;
}
template <int K>
inline TJet<K> operator*(double c, const TJet<K>& a) { return a * c; }
template <int K>
inline TJet<K> operator/(const TJet<K>& a, double c) {
  TJet<K> r;
  r.val = a.val / c;
  for (int k = 0; k < K; ++k) r.d[k] = a.d[k] / c;
  return r;
}
template <int K>
inline TJet<K> operator/(double c, const TJet<K>& a) {
  return TJet<K>::constant(c, a.val.dim()) / a;
}

template <int K>
inline TJet<K> jexp(const TJet<K>& a) {
  TJet<K> r;
  r.val = jexp(a.val);
  for (int k = 0; k < K; ++k) r.d[k] = r.val * a.d[k];
  return r;
}

template <int K>
inline TJet<K> jlog(const TJet<K>& a) {
  TJet<K> r;
  r.val = jlog(a.val);
  for (int k = 0; k < K; ++k) r.d[k] = a.d[k] / a.val;
  return r;
}

template <int K>
inline TJet<K> jsqrt(const TJet<K>& a) {
  TJet<K> r;
  r.val = jsqrt(a.val);
  for (int k = 0; k < K; ++k) r.d[k] = a.d[k] / (2.0 * r.val);
  return r;
}

template <int K>
inline TJet<K> jsin(const TJet<K>& a) {
  TJet<K> r;
  r.val = jsin(a.val);
  const Jet c = jcos(a.val);
  for (int k = 0; k < K; ++k) r.d[k] = c * a.d[k];
  return r;
}

template <int K>
inline TJet<K> jcos(const TJet<K>& a) {
  TJet<K> r;
  r.val = jcos(a.val);
  const Jet s = jsin(a.val);
  for (int k = 0; k < K; ++k) r.d[k] = -(s * a.d[k]);
  return r;
}

template <int K>
inline TJet<K> jpow(const TJet<K>& a, double r) {
  TJet<K> out;
  out.val = jpow(a.val, r);
  if (r == 0.0) {
    for (int k = 0; k < K; ++k) out.d[k] = Jet::constant(0.0, a.val.dim());
    return out;
  }
  const Jet fp = jpow(a.val, r - 1.0) * r;
  for (int k = 0; k < K; ++k) out.d[k] = fp * a.d[k];
  return out;
}

template <int K>
inline TJet<K> jatan2(const TJet<K>& y, const TJet<K>& x) {
  TJet<K> r;
  r.val = jatan2(y.val, x.val);
  const Jet q = x.val * x.val + y.val * y.val;
  for (int k = 0; k < K; ++k) r.d[k] = (x.val * y.d[k] - y.val * x.d[k]) / q;
  return r;
}

// Plain-double overloads so numeric evaluation can share the generic code
// paths (and the same domain checks) with the jet instantiations.
inline double jexp(double a) { return std::exp(a); }
inline double jlog(double a) {
  if (a <= 0.0) throw DiffDomainError("log", a);
  return std::log(a);
}
inline double jsqrt(double a) {
  if (a <= 0.0) throw DiffDomainError("sqrt", a);
  return std::sqrt(a);
}
inline double jsin(double a) { return std::sin(a); }
inline double jcos(double a) { return std::cos(a); }
inline double jpow(double a, double r) {
  if (r == 0.0) return 1.0;
  if (r == 1.0) return a;
  const bool integral = (r == std::nearbyint(r)) && std::abs(r) < 1e15;
  if (!integral && a <= 0.0) throw DiffDomainError("pow_real", a);
  if (integral && a == 0.0 && r < 2.0) throw DiffDomainError("pow_real", a);
  return std::pow(a, r);
}
inline double jatan2(double y, double x) {
  if (x == 0.0 && y == 0.0) throw DiffDomainError("atan2", 0.0);
  return std::atan2(y, x);
}

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value; }
template <int K>
inline double value_of(const TJet<K>& x) { return x.val.value; }

inline double scalar_like(double, double c) { return c; }
inline Jet scalar_like(const Jet& proto, double c) { return Jet::constant(c, proto.dim()); }
template <int K>
inline TJet<K> scalar_like(const TJet<K>& proto, double c) {
  return TJet<K>::constant(c, proto.val.dim());
}

}  // namespace levidf
