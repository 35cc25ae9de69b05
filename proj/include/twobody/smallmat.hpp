#pragma once

#include <cassert>
#include <vector>

#include "twobody/dual.hpp"

namespace twobody {

/// Dense square matrix over an arbitrary scalar (complex or nested dual).
/// Dimensions here are 1..16, so naive products are the right tool.
template <class S>
class DMat {
 public:
  DMat() = default;
  explicit DMat(int n) : n_(n), a_(static_cast<size_t>(n) * n) {}

  static DMat zero(int n) { return DMat(n); }
  static DMat identity(int n) {
    DMat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = lift_scalar<S>(1.0);
    return m;
  }
  /// diag(s, s, ..., s)
  static DMat scalar(int n, const S& s) {
    DMat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = s;
    return m;
  }

  int dim() const { return n_; }
  S& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  const S& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

  DMat operator-() const {
    DMat r(n_);
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = -a_[k];
    return r;
  }
  friend DMat operator+(const DMat& x, const DMat& y) {
    assert(x.n_ == y.n_);
    DMat r(x.n_);
    for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] + y.a_[k];
    return r;
  }
  friend DMat operator-(const DMat& x, const DMat& y) {
    assert(x.n_ == y.n_);
    DMat r(x.n_);
    for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] - y.a_[k];
    return r;
  }
  friend DMat operator*(const DMat& x, const DMat& y) {
    assert(x.n_ == y.n_);
    const int n = x.n_;
    DMat r(n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const S& xik = x(i, k);
        for (int j = 0; j < n; ++j) r(i, j) += xik * y(k, j);
      }
    return r;
  }
  friend DMat operator*(const DMat& x, const S& s) {
    DMat r(x.n_);
    for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] * s;
    return r;
  }
  friend DMat operator*(const S& s, const DMat& x) { return x * s; }
  friend DMat operator*(const DMat& x, double s) {
    DMat r(x.n_);
    for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] * s;
    return r;
  }
  friend DMat operator*(double s, const DMat& x) { return x * s; }

  DMat& operator+=(const DMat& y) { *this = *this + y; return *this; }
  DMat& operator-=(const DMat& y) { *this = *this - y; return *this; }

  DMat adjoint() const {
    using twobody::conj;
    using std::conj;
    DMat r(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r(j, i) = conj((*this)(i, j));
    return r;
  }

  S trace() const {
    S t{};
    for (int i = 0; i < n_; ++i) t = t + (*this)(i, i);
    return t;
  }

 private:
  int n_ = 0;
  std::vector<S> a_;
};

/// Entrywise collapse of a dual matrix to its complex value part.
template <class S>
DMat<C0> value_part(const DMat<S>& m) {
  DMat<C0> r(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) r(i, j) = value_of(m(i, j));
  return r;
}

/// Value part of a jet matrix (entries Dual<S>) as a DMat<S>.
template <class S>
DMat<S> jet_value(const DMat<Dual<S>>& m) {
  DMat<S> r(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) r(i, j) = m(i, j).v;
  return r;
}

/// Partial derivative slot A of a jet matrix.
template <class S>
DMat<S> jet_deriv(const DMat<Dual<S>>& m, int axis) {
  DMat<S> r(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) r(i, j) = m(i, j).d[axis];
  return r;
}

}  // namespace twobody
