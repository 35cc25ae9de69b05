#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>
#include <vector>

#include "twobody/smallmat.hpp"

namespace twobody {

using ComplexMatrix = Eigen::MatrixXcd;

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Explicit-tolerance equality, the only comparison the matrix types use.
inline bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs(a - b) <= tol;
}

inline bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

inline double hermiticity_residual(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}
inline double antihermiticity_residual(const ComplexMatrix& m) {
  return max_abs(m + m.adjoint());
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

/// Eigenvalues of a Hermitian matrix, ascending.  The caller asserts
/// Hermiticity; we symmetrize to suppress rounding noise.
inline Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  return es.eigenvalues();
}

// DMat <-> Eigen bridge

inline ComplexMatrix to_eigen(const DMat<C0>& m) {
  ComplexMatrix r(m.dim(), m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) r(i, j) = m(i, j);
  return r;
}

inline DMat<C0> from_eigen(const ComplexMatrix& m) {
  DMat<C0> r(static_cast<int>(m.rows()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

/// Lift a constant complex matrix into scalar type S (zero derivatives).
template <class S>
DMat<S> lift_matrix(const ComplexMatrix& m) {
  DMat<S> r(static_cast<int>(m.rows()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = lift_scalar<S>(m(i, j));
  return r;
}

inline double max_abs(const DMat<C0>& m) {
  double w = 0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) w = std::max(w, std::abs(m(i, j)));
  return w;
}

}  // namespace twobody
