#pragma once

#include "levidf/jet.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>

namespace levidf {

using RealFn = std::function<double(const Eigen::VectorXd&)>;

/// Independent derivative oracle: central finite differences at steps h and
/// h/2, Richardson-extrapolated to O(h^4). Returns the same Jet carrier as the
/// forward-mode path but only ever calls `f` for plain values, so it shares no
/// code with the propagation rules it is used to check.
inline Jet fd_jet(const RealFn& f, const Eigen::VectorXd& x, double h = 1e-4) {
  const Eigen::Index m = x.size();
  Jet out = Jet::constant(f(x), m);

  auto at = [&](Eigen::Index i, double di, Eigen::Index j, double dj) {
    Eigen::VectorXd p = x;
    p[i] += di;
    if (j >= 0) p[j] += dj;
    return f(p);
  };

  auto grad_step = [&](Eigen::Index i, double s) {
    return (at(i, s, -1, 0.0) - at(i, -s, -1, 0.0)) / (2.0 * s);
  };
  auto diag_step = [&](Eigen::Index i, double s) {
    return (at(i, s, -1, 0.0) - 2.0 * out.value + at(i, -s, -1, 0.0)) / (s * s);
  };
  auto mixed_step = [&](Eigen::Index i, Eigen::Index j, double s) {
    return (at(i, s, j, s) - at(i, s, j, -s) - at(i, -s, j, s) + at(i, -s, j, -s)) /
           (4.0 * s * s);
  };
  auto richardson = [](double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; };

  for (Eigen::Index i = 0; i < m; ++i) {
    out.grad[i] = richardson(grad_step(i, h), grad_step(i, h / 2.0));
    out.hess(i, i) = richardson(diag_step(i, h), diag_step(i, h / 2.0));
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double v = richardson(mixed_step(i, j, h), mixed_step(i, j, h / 2.0));
      out.hess(i, j) = v;
      out.hess(j, i) = v;
    }
  }
  return out;
}

/// Agreement policy for AD-vs-finite-difference comparisons:
/// relative 1e-6 or absolute 1e-9, whichever is looser.
inline bool fd_close(double a, double b, double rel = 1e-6, double abs = 1e-9) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= std::max(abs, rel * scale);
}

inline bool fd_close_jet(const Jet& a, const Jet& b, double rel = 1e-6, double abs = 1e-9) {
  if (a.dim() != b.dim()) return false;
  if (!fd_close(a.value, b.value, rel, abs)) return false;
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    if (!fd_close(a.grad[i], b.grad[i], rel, abs)) return false;
    for (Eigen::Index j = 0; j < a.dim(); ++j)
      if (!fd_close(a.hess(i, j), b.hess(i, j), rel, abs)) return false;
  }
  return true;
}

}  // namespace levidf
