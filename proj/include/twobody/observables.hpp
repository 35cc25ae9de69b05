#pragma once

#include <vector>

#include "twobody/generators.hpp"

namespace twobody {

namespace detail {

/// Order-0 part of X_a (axes 1..3, 0-based row index a0):
///   S^(1)_ab p_b / (E(E+M))
///   + i (Gamma_a/(2E) - p_a Gamma_c p_c/(2E^2(E+M))) (m + Gamma_{c+3} p_{c+3})/M.
inline MatrixFn position_offset_first(int a0, double m) {
  return MatrixFn(8, [a0, m](const auto& pt) {
    using S = typename std::decay_t<decltype(pt)>::scalar_type;
    const auto& kk = CliffordConstants::get();
    const cplx i(0, 1);
    const S E = energy_total(pt, m);
    const S M = mass_internal(pt, m);
    DMat<S> acc(8);
    for (int b = 0; b < 3; ++b) acc += lift_matrix<S>(kk.spins.S1[a0][b]) * pt.p[b];
    acc = acc * guarded_inverse(E * (E + M), "E(E+M)");
    DMat<S> gp(8), gp3(8);
    for (int c = 0; c < 3; ++c) {
      gp += lift_matrix<S>(kk.gammaA[c]) * pt.p[c];
      gp3 += lift_matrix<S>(kk.gammaA[3 + c]) * pt.p[3 + c];
    }
    const DMat<S> inner = lift_matrix<S>(kk.gammaA[a0]) * guarded_inverse(2.0 * E, "2E") -
                          gp * (pt.p[a0] * guarded_inverse(2.0 * E * E * (E + M), "2E^2(E+M)"));
    const DMat<S> sector2 = (DMat<S>::scalar(8, lift_scalar<S>(m)) + gp3) *
                            guarded_inverse(M, "M");
    acc += (i * lift_scalar<S>(1.0)) * (inner * sector2);
    return acc;
  });
}

/// Order-0 part of X_{a+3}:
///   S^(2)_{a+3,b+3} p_{b+3}/(M(M+m)) + i Gamma_{a+3}/(2M)
///   - i p_{a+3} Gamma_{c+3} p_{c+3} / (2M^2(M+m))
///   - i p_{a+3}/(2E^2 M^2) Gamma_c p_c (m + Gamma_{c+3} p_{c+3}).
/// The last denominator is the printed 2E^2M^2 form; it is the one that
/// matches U^dag x U (see the positions suite finding).
inline MatrixFn position_offset_extra(int a0, double m) {
  return MatrixFn(8, [a0, m](const auto& pt) {
    using S = typename std::decay_t<decltype(pt)>::scalar_type;
    const auto& kk = CliffordConstants::get();
    const cplx i(0, 1);
    const S E = energy_total(pt, m);
    const S M = mass_internal(pt, m);
    DMat<S> gp(8), gp3(8);
    for (int c = 0; c < 3; ++c) {
      gp += lift_matrix<S>(kk.gammaA[c]) * pt.p[c];
      gp3 += lift_matrix<S>(kk.gammaA[3 + c]) * pt.p[3 + c];
    }
    DMat<S> acc(8);
    for (int b = 0; b < 3; ++b) acc += lift_matrix<S>(kk.spins.S2_extra(a0, b)) * pt.p[3 + b];
    acc = acc * guarded_inverse(M * (M + m), "M(M+m)");
    acc += (i * lift_scalar<S>(1.0)) * lift_matrix<S>(kk.gammaA[3 + a0]) *
           guarded_inverse(2.0 * M, "2M");
    acc -= (i * pt.p[3 + a0] * guarded_inverse(2.0 * M * M * (M + m), "2M^2(M+m)")) * gp3;
    const DMat<S> tail = gp * (DMat<S>::scalar(8, lift_scalar<S>(m)) + gp3);
    acc -= (i * pt.p[3 + a0] * guarded_inverse(2.0 * E * E * M * M, "2E^2M^2")) * tail;
    return acc;
  });
}

}  // namespace detail

/// Position operator X_A (axis 1..6) in printed closed form:
/// x_A plus a matrix function of p.
inline DiffOp position_X(int axis, const TwoBodyParams& params) {
  params.validate();
  if (params.mode != MassMode::EqualMass)
    throw std::invalid_argument("position_X: equal-mass mode required");
  if (axis < 1 || axis > 6) throw std::out_of_range("position_X: axis must be 1..6");
  const double m = params.m;
  MatrixFn offset = axis <= 3 ? detail::position_offset_first(axis - 1, m)
                              : detail::position_offset_extra(axis - 4, m);
  std::array<MatrixFn, 6> B;
  for (int c = 0; c < 6; ++c) B[c] = MatrixFn::zero(8);
  B[axis - 1] = MatrixFn::constant(cplx(0, 1) * ComplexMatrix::Identity(8, 8));
  return DiffOp::order1(std::move(offset), std::move(B));
}

/// Pointwise adjoint of a matrix function (valid jet-wise: the momenta are
/// real, so derivatives commute with the conjugate transpose).
inline MatrixFn adjoint_fn(const MatrixFn& U) {
  return MatrixFn(U.dim(), [U](const auto& pt) { return U(pt).adjoint(); });
}

/// The independent route: X_A = U^dag x_A U computed by the conjugation
/// engine.  Used to cross-check the printed formulas.
inline DiffOp position_X_via_U(int axis, const TwoBodyParams& params) {
  if (axis < 1 || axis > 6) throw std::out_of_range("position_X_via_U: axis must be 1..6");
  return conjugate(adjoint_fn(foldy_U(params)), DiffOp::position(axis, 8));
}

/// Positive-energy projector P+ = (I + H(q)/E(q))/2 for any order-0
/// Hamiltonian whose square is scalar; implements the subsidiary condition
/// (1 - H/sqrt(H^2)) Psi = 0 on its columns.
inline ComplexMatrix positive_projector(const DiffOp& H, const MomentumPoint& q) {
  if (H.order() != 0) throw std::invalid_argument("positive_projector: H must be order 0");
  const ComplexMatrix h = to_eigen(H.A().value_at(q));
  const int n = static_cast<int>(h.rows());
  const ComplexMatrix h2 = h * h;
  const double e2 = h2.trace().real() / n;
  if (e2 < 1e-300) throw domain_error("positive_projector: E(q) = 0");
  const double E = std::sqrt(e2);
  if (max_abs(h2 - e2 * ComplexMatrix::Identity(n, n)) > 1e-10 * std::max(1.0, e2))
    throw domain_error("positive_projector: H(q)^2 is not scalar");
  return 0.5 * (ComplexMatrix::Identity(n, n) + h / E);
}

inline ComplexMatrix positive_projector_value(const ComplexMatrix& h) {
  const int n = static_cast<int>(h.rows());
  const double E = std::sqrt((h * h).trace().real() / n);
  return 0.5 * (ComplexMatrix::Identity(n, n) + h / E);
}

/// Relative velocity V_{a+3} = -i [X_{a+3}, H] at q (order-0 matrix; the
/// order-1 coefficient cancels identically).
inline ComplexMatrix velocity(int a, const TwoBodyParams& params, const MomentumPoint& q) {
  if (a < 1 || a > 3) throw std::out_of_range("velocity: index must be 1..3");
  const DiffOp X = position_X(3 + a, params);
  const DiffOp H = hamiltonian_free(params);
  const GradedValues c = commutator_values(eval_order1(X, q), eval_order1(H, q));
  return cplx(0, -1) * c.A;
}

/// Eigen-spectra of the relative velocity at one point.
struct VelocitySpectrum {
  MomentumPoint point;
  std::array<Eigen::VectorXd, 3> eig_V;  // eigenvalues of V_{a+3}, ascending
  Eigen::VectorXd eig_V2;                // eigenvalues of V_4^2+V_5^2+V_6^2
  std::array<double, 3> positive_expectation;  // tr(P+ V P+)/4
  double hermiticity_residual = 0;
};

inline VelocitySpectrum velocity_spectrum(const TwoBodyParams& params, const MomentumPoint& q) {
  VelocitySpectrum s;
  s.point = q;
  const DiffOp H = hamiltonian_free(params);
  const ComplexMatrix Pp = positive_projector(H, q);
  ComplexMatrix v2 = ComplexMatrix::Zero(8, 8);
  for (int a = 1; a <= 3; ++a) {
    const ComplexMatrix v = velocity(a, params, q);
    s.hermiticity_residual = std::max(s.hermiticity_residual, hermiticity_residual(v));
    s.eig_V[a - 1] = hermitian_eigenvalues(v);
    s.positive_expectation[a - 1] = (Pp * v * Pp).trace().real() / 4.0;
    v2 += v * v;
  }
  s.eig_V2 = hermitian_eigenvalues(v2);
  return s;
}

/// Subluminality battery: max eigenvalue of V^2 per point, pass iff < 1.
struct SubluminalEntry {
  MomentumPoint point;
  double max_eig_v2 = 0;
  double margin = 0;  // 1 - max
  bool pass = false;
};
struct SubluminalReport {
  std::vector<SubluminalEntry> entries;
  double min_margin = 1;
  bool pass = true;
};

inline SubluminalReport subluminal_check(const TwoBodyParams& params,
                                         const std::vector<MomentumPoint>& points) {
  SubluminalReport rep;
  for (const auto& q : points) {
    const VelocitySpectrum s = velocity_spectrum(params, q);
    SubluminalEntry e;
    e.point = q;
    e.max_eig_v2 = s.eig_V2.maxCoeff();
    e.margin = 1.0 - e.max_eig_v2;
    e.pass = e.max_eig_v2 < 1.0;
    rep.min_margin = std::min(rep.min_margin, e.margin);
    rep.pass = rep.pass && e.pass;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace twobody
