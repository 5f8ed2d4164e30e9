#pragma once

#include "levidf/jet.hpp"

#include <complex>

namespace levidf {

/// Complex value tracked as a (re, im) pair of generic scalars. Non-holomorphic
/// fields (every boundary distance function) make complex differentiability
/// useless, so all complex arithmetic is spelled out on the pair and the
/// scalar type carries the real partial derivatives.
///
/// `real` marks values that are structurally real (imaginary part identically
/// zero by construction, not merely numerically small); log/sqrt/pow use it to
/// apply the real-calculus domain rules instead of a principal branch.
template <class T>
struct Cplx {
  T re;
  T im;
  bool real = false;

  static Cplx from_real(T x) { return Cplx{std::move(x), scalar_like(x, 0.0), true}; }
};

template <class T>
Cplx<T> cconst(const T& proto, double c) {
  return Cplx<T>{scalar_like(proto, c), scalar_like(proto, 0.0), true};
}

template <class T>
Cplx<T> cimag_unit(const T& proto) {
  return Cplx<T>{scalar_like(proto, 0.0), scalar_like(proto, 1.0), false};
}

template <class T>
Cplx<T> operator+(const Cplx<T>& a, const Cplx<T>& b) {
  return {a.re + b.re, a.im + b.im, a.real && b.real};
}

template <class T>
Cplx<T> operator-(const Cplx<T>& a, const Cplx<T>& b) {
  return {a.re - b.re, a.im - b.im, a.real && b.real};
}

template <class T>
Cplx<T> operator-(const Cplx<T>& a) {
  return {-a.re, -a.im, a.real};
}

template <class T>
Cplx<T> operator*(const Cplx<T>& a, const Cplx<T>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re, a.real && b.real};
}

template <class T>
Cplx<T> operator/(const Cplx<T>& a, const Cplx<T>& b) {
  const T q = b.re * b.re + b.im * b.im;
  if (value_of(q) == 0.0) throw DiffDomainError("div", 0.0);
  return {(a.re * b.re + a.im * b.im) / q, (a.im * b.re - a.re * b.im) / q,
          a.real && b.real};
}

template <class T>
Cplx<T> cconj(const Cplx<T>& a) {
  return {a.re, -a.im, a.real};
}

template <class T>
Cplx<T> cre(const Cplx<T>& a) {
  return Cplx<T>::from_real(a.re);
}

template <class T>
Cplx<T> cim(const Cplx<T>& a) {
  return Cplx<T>::from_real(a.im);
}

/// |w|^2, the only modulus primitive; smooth everywhere.
template <class T>
Cplx<T> cabs2(const Cplx<T>& a) {
  return Cplx<T>::from_real(a.re * a.re + a.im * a.im);
}

template <class T>
Cplx<T> cexp(const Cplx<T>& a) {
  if (a.real) return Cplx<T>::from_real(jexp(a.re));
  const T e = jexp(a.re);
  return {e * jcos(a.im), e * jsin(a.im), false};
}

/// Real-calculus log on structurally real input; principal branch otherwise.
template <class T>
Cplx<T> clog(const Cplx<T>& a) {
  if (a.real) return Cplx<T>::from_real(jlog(a.re));
  const T q = a.re * a.re + a.im * a.im;
  if (value_of(q) == 0.0) throw DiffDomainError("log", 0.0);
  return {0.5 * jlog(q), jatan2(a.im, a.re), false};
}

template <class T>
Cplx<T> csqrt(const Cplx<T>& a) {
  if (a.real) return Cplx<T>::from_real(jsqrt(a.re));
  const Cplx<T> l = clog(a);
  return cexp(Cplx<T>{0.5 * l.re, 0.5 * l.im, false});
}

template <class T>
Cplx<T> cpow_real(const Cplx<T>& a, double r) {
  if (a.real) return Cplx<T>::from_real(jpow(a.re, r));
  const Cplx<T> l = clog(a);
  return cexp(Cplx<T>{r * l.re, r * l.im, false});
}

inline std::complex<double> to_std(const Cplx<double>& a) { return {a.re, a.im}; }

}  // namespace levidf
