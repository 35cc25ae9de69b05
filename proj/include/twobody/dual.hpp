#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace twobody {

using cplx = std::complex<double>;

/// Forward-mode dual number over the field K, carrying six partial
/// derivatives (one per momentum component).  Nesting Dual<Dual<...>>
/// yields exact higher-order derivatives; all operator-calculus
/// coefficient functions are written generically over the scalar type
/// so the same code evaluates values, gradients and Hessians.
template <class K>
struct Dual {
  using field_type = K;

  K v{};
  std::array<K, 6> d{};

  Dual() = default;
  Dual(double x) : v(x) {}
  Dual(const K& x) : v(x) {}

  Dual operator-() const {
    Dual r;
    r.v = -v;
    for (int i = 0; i < 6; ++i) r.d[i] = -d[i];
    return r;
  }

  friend Dual operator+(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v + b.v;
    for (int i = 0; i < 6; ++i) r.d[i] = a.d[i] + b.d[i];
    return r;
  }
  friend Dual operator-(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v - b.v;
    for (int i = 0; i < 6; ++i) r.d[i] = a.d[i] - b.d[i];
    return r;
  }
  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v * b.v;
    for (int i = 0; i < 6; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    return r;
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v / b.v;
    for (int i = 0; i < 6; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) / b.v;
    return r;
  }

  // constants (zero derivative at every level)
  friend Dual operator+(const Dual& a, double c) { Dual r = a; r.v = a.v + c; return r; }
  friend Dual operator+(double c, const Dual& a) { return a + c; }
  friend Dual operator-(const Dual& a, double c) { Dual r = a; r.v = a.v - c; return r; }
  friend Dual operator-(double c, const Dual& a) { return -a + c; }
  friend Dual operator*(const Dual& a, double c) {
    Dual r;
    r.v = a.v * c;
    for (int i = 0; i < 6; ++i) r.d[i] = a.d[i] * c;
    return r;
  }
  friend Dual operator*(double c, const Dual& a) { return a * c; }
  friend Dual operator/(const Dual& a, double c) { return a * (1.0 / c); }
  friend Dual operator/(double c, const Dual& a) {
    Dual r;
    r.v = c / a.v;
    for (int i = 0; i < 6; ++i) r.d[i] = -(r.v / a.v) * a.d[i];
    return r;
  }

  Dual& operator+=(const Dual& b) { *this = *this + b; return *this; }
  Dual& operator-=(const Dual& b) { *this = *this - b; return *this; }
  Dual& operator*=(const Dual& b) { *this = *this * b; return *this; }
};

template <class K>
Dual<K> sqrt(const Dual<K>& a) {
  using std::sqrt;
  Dual<K> r;
  r.v = sqrt(a.v);
  const K half{0.5};
  for (int i = 0; i < 6; ++i) r.d[i] = half * a.d[i] / r.v;
  return r;
}

template <class K>
Dual<K> conj(const Dual<K>& a) {
  using std::conj;
  Dual<K> r;
  r.v = conj(a.v);
  for (int i = 0; i < 6; ++i) r.d[i] = conj(a.d[i]);
  return r;
}

/// Collapse a (possibly nested) dual to its underlying complex value.
inline cplx value_of(const cplx& x) { return x; }
template <class K>
cplx value_of(const Dual<K>& x) { return value_of(x.v); }

namespace detail {
template <class S>
struct scalar_lift {
  static S from(const cplx& x) { return S(x); }
  static S from(double x) { return S(x); }
};
template <class K>
struct scalar_lift<Dual<K>> {
  static Dual<K> from(const cplx& x) { Dual<K> r; r.v = scalar_lift<K>::from(x); return r; }
  static Dual<K> from(double x) { Dual<K> r; r.v = scalar_lift<K>::from(x); return r; }
};
}  // namespace detail

/// Lift a complex (or real) constant to scalar type S with zero derivatives.
template <class S>
S lift_scalar(const cplx& x) { return detail::scalar_lift<S>::from(x); }
template <class S>
S lift_scalar(double x) { return detail::scalar_lift<S>::from(x); }

// mixed complex-constant arithmetic, needed so generic coefficient code can
// multiply by i etc. at any depth
template <class K>
Dual<K> operator*(const Dual<K>& a, const cplx& c) { return a * Dual<K>(lift_scalar<K>(c)); }
template <class K>
Dual<K> operator*(const cplx& c, const Dual<K>& a) { return a * c; }
template <class K>
Dual<K> operator+(const Dual<K>& a, const cplx& c) { return a + Dual<K>(lift_scalar<K>(c)); }
template <class K>
Dual<K> operator+(const cplx& c, const Dual<K>& a) { return a + c; }
template <class K>
Dual<K> operator-(const Dual<K>& a, const cplx& c) { return a - Dual<K>(lift_scalar<K>(c)); }
template <class K>
Dual<K> operator-(const cplx& c, const Dual<K>& a) { return -a + c; }
template <class K>
Dual<K> operator/(const Dual<K>& a, const cplx& c) { return a * (cplx(1.0) / c); }

/// Scalar depth tower used by the operator calculus.
using C0 = cplx;
using C1 = Dual<C0>;
using C2 = Dual<C1>;
using C3 = Dual<C2>;
using C4 = Dual<C3>;

}  // namespace twobody
