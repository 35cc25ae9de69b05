#pragma once

#include <string>
#include <vector>

#include "twobody/clifford.hpp"
#include "twobody/opcalc.hpp"

namespace twobody {

inline const char* kGeneratorNames[10] = {"P0", "P1", "P2", "P3", "J12",
                                          "J13", "J23", "K1",  "K2", "K3"};

/// The ten Poincare generators over one parameter set.  J_ab is stored for
/// a < b; K_a denotes the boost J_0a.  E and M ride along as the named
/// scalar coefficient functions of the set.
struct GeneratorSet {
  enum class Kind { Raw, Canonical, ScalarModel };
  Kind kind = Kind::Raw;
  TwoBodyParams params;
  int dim = 8;
  DiffOp P0;
  std::array<DiffOp, 3> P;
  std::array<DiffOp, 3> Jpair;  // J12, J13, J23
  std::array<DiffOp, 3> K;
  MatrixFn E_fn, M_fn;

  /// Generator by canonical index 0..9 (order of kGeneratorNames).
  const DiffOp& by_index(int i) const {
    if (i == 0) return P0;
    if (i < 4) return P[i - 1];
    if (i < 7) return Jpair[i - 4];
    return K[i - 7];
  }
};

namespace detail {

struct CliffordConstants {
  ComplexMatrix gamma0;
  std::array<ComplexMatrix, 6> alpha;   // Gamma_0 Gamma_A
  std::array<ComplexMatrix, 6> gammaA;  // Gamma_A, A = 1..6
  SpinTensorSet spins;
  static const CliffordConstants& get() {
    static const CliffordConstants c = [] {
      CliffordConstants k;
      const GammaSet g = gamma8();
      k.gamma0 = g.gamma(0);
      for (int A = 0; A < 6; ++A) {
        k.gammaA[A] = g.gamma(1 + A);
        k.alpha[A] = k.gamma0 * g.gamma(1 + A);
      }
      k.spins = spin_tensors(g);
      return k;
    }();
    return c;
  }
};

}  // namespace detail

/// H(p) = Gamma_0 Gamma_A p_A + Gamma_0 m as a matrix function (any mass).
inline MatrixFn free_hamiltonian_fn(double mass) {
  const auto& k = detail::CliffordConstants::get();
  const ComplexMatrix massterm = mass * k.gamma0;
  return MatrixFn(8, [massterm](const auto& pt) {
    using S = typename std::decay_t<decltype(pt)>::scalar_type;
    const auto& kk = detail::CliffordConstants::get();
    DMat<S> acc = lift_matrix<S>(massterm);
    for (int A = 0; A < 6; ++A) acc += lift_matrix<S>(kk.alpha[A]) * pt.p[A];
    return acc;
  });
}

/// Plain-value Hamiltonian for grid code: equal-mass Eq-form or the
/// unequal-mass form with the (m1+m2)/sqrt(m1 m2) internal factor.
inline ComplexMatrix hamiltonian_value(const TwoBodyParams& params,
                                       const std::array<double, 6>& p) {
  const auto& k = detail::CliffordConstants::get();
  ComplexMatrix h;
  if (params.mode == MassMode::EqualMass) {
    h = params.m * k.gamma0;
    for (int A = 0; A < 6; ++A) h += p[A] * k.alpha[A];
  } else {
    const double lam = (params.m1 + params.m2) / std::sqrt(params.m1 * params.m2);
    h = (params.m1 + params.m2) * k.gamma0;
    for (int a = 0; a < 3; ++a) h += p[a] * k.alpha[a] + lam * p[3 + a] * k.alpha[3 + a];
  }
  return h;
}

/// Free equal-mass Hamiltonian, Hermitian at every point, H^2 = (p^2+m^2) I.
inline DiffOp hamiltonian_free(const TwoBodyParams& params) {
  params.validate();
  if (params.mode != MassMode::EqualMass)
    throw std::invalid_argument("hamiltonian_free: equal-mass mode required");
  return DiffOp::multiplication(free_hamiltonian_fn(params.m));
}

/// Unequal-mass Hamiltonian: H' = Gamma_0 Gamma_a p_a
/// + (m1+m2)/sqrt(m1 m2) Gamma_0 Gamma_{a+3} p_{a+3} + (m1+m2) Gamma_0,
/// with p_{a+3} read as the K' relative momentum.
inline DiffOp hamiltonian_unequal(const TwoBodyParams& params) {
  params.validate();
  if (params.mode != MassMode::UnequalMass)
    throw std::invalid_argument("hamiltonian_unequal: unequal-mass mode required");
  const double lam = (params.m1 + params.m2) / std::sqrt(params.m1 * params.m2);
  const double msum = params.m1 + params.m2;
  return DiffOp::multiplication(MatrixFn(8, [lam, msum](const auto& pt) {
    using S = typename std::decay_t<decltype(pt)>::scalar_type;
    const auto& kk = detail::CliffordConstants::get();
    DMat<S> acc = lift_matrix<S>(msum * kk.gamma0);
    for (int a = 0; a < 3; ++a) {
      acc += lift_matrix<S>(kk.alpha[a]) * pt.p[a];
      acc += lift_matrix<S>(lam * kk.alpha[3 + a]) * pt.p[3 + a];
    }
    return acc;
  }));
}

/// The momentum-dependent unitary bringing H to the canonical form Gamma_0 E:
///   U = (E + M + Gamma_c p_c)(M + m + Gamma_{c+3} p_{c+3}) / (2 sqrt(M E (E+M)(M+m))).
/// U factors into two Foldy-Wouthuysen steps, one per sector; the scalar
/// denominator is fixed by U U^dag = I (the cross products collapse to
/// 2M(M+m) and 2E(E+M) by the Clifford relations).
inline MatrixFn foldy_U(const TwoBodyParams& params) {
  params.validate();
  if (params.mode != MassMode::EqualMass)
    throw std::invalid_argument("foldy_U: equal-mass mode required");
  const double m = params.m;
  return MatrixFn(8, [m](const auto& pt) {
    using S = typename std::decay_t<decltype(pt)>::scalar_type;
    const auto& kk = detail::CliffordConstants::get();
    using std::sqrt;
    using twobody::sqrt;
    const S E = energy_total(pt, m);
    const S M = mass_internal(pt, m);
    DMat<S> f1 = DMat<S>::scalar(8, E + M);
    DMat<S> f2 = DMat<S>::scalar(8, M + m);
    for (int c = 0; c < 3; ++c) {
      f1 += lift_matrix<S>(kk.gammaA[c]) * pt.p[c];
      f2 += lift_matrix<S>(kk.gammaA[3 + c]) * pt.p[3 + c];
    }
    const S den = 2.0 * sqrt(M * E * (E + M) * (M + m));
    return (f1 * f2) * guarded_inverse(den, "2 sqrt(M E (E+M)(M+m))");
  });
}

namespace detail {

/// J_ab = M_ab + m_ab + S_ab with constant spin part Sab:
/// order-1 coefficients i p_b, -i p_a (and the extra-axis pair).
inline DiffOp rotation_op(int a0, int b0, const ComplexMatrix& Sab, int dim) {
  MatrixFn A = MatrixFn::constant(Sab);
  std::array<MatrixFn, 6> B;
  for (int c = 0; c < 6; ++c) {
    B[c] = MatrixFn(dim, [a0, b0, c, dim](const auto& pt) {
      using S = typename std::decay_t<decltype(pt)>::scalar_type;
      const cplx i(0, 1);
      S w = lift_scalar<S>(0.0);
      if (c == a0) w = w + i * pt.p[b0];
      if (c == b0) w = w - i * pt.p[a0];
      if (c == a0 + 3) w = w + i * pt.p[b0 + 3];
      if (c == b0 + 3) w = w - i * pt.p[a0 + 3];
      return DMat<S>::scalar(dim, w);
    });
  }
  return DiffOp::order1(std::move(A), std::move(B));
}

/// Boost J_0a = t p_a - 1/2 (x_a P0 + P0 x_a) - (P0/E)(Spin_ab + m_ab) p_b / (E+M)
/// in closed coefficient form.  P0fn is the set's Hamiltonian (H, Gamma_0 E,
/// or the scalar E model); Spin holds the a-row spin matrices (may be empty
/// for the scalar model).
inline DiffOp boost_op(int a0, const MatrixFn& P0fn, const std::array<ComplexMatrix, 3>* spin_row,
                       double mass, int dim) {
  MatrixFn A(dim, [a0, P0fn, spin_row, mass, dim](const auto& pt) {
    using S = typename std::decay_t<decltype(pt)>::scalar_type;
    const cplx i(0, 1);
    const auto P0j = P0fn(seed_point(pt));
    DMat<S> acc = DMat<S>::scalar(dim, lift_scalar<S>(pt.t) * pt.p[a0]);
    acc -= (0.5 * i) * lift_scalar<S>(1.0) * jet_deriv(P0j, a0);
    if (spin_row) {
      const S E = energy_total(pt, mass);
      const S M = mass_internal(pt, mass);
      DMat<S> sp(dim);
      for (int b = 0; b < 3; ++b) sp += lift_matrix<S>((*spin_row)[b]) * pt.p[b];
      acc -= jet_value(P0j) * sp * guarded_inverse(E * (E + M), "E(E+M)");
    }
    return acc;
  });
  std::array<MatrixFn, 6> B;
  for (int c = 0; c < 6; ++c) {
    B[c] = MatrixFn(dim, [a0, c, P0fn, mass, dim](const auto& pt) {
      using S = typename std::decay_t<decltype(pt)>::scalar_type;
      const cplx i(0, 1);
      DMat<S> acc(dim);
      if (c == a0) acc -= i * lift_scalar<S>(1.0) * P0fn(pt);
      if (c >= 3) {
        const S E = energy_total(pt, mass);
        const S M = mass_internal(pt, mass);
        S w = pt.p[a0 + 3] * pt.p[c - 3];
        if (c == a0 + 3)
          for (int b = 0; b < 3; ++b) w = w - pt.p[b] * pt.p[b + 3];
        acc += (i * lift_scalar<S>(1.0) * w * guarded_inverse(E * (E + M), "E(E+M)")) * P0fn(pt);
      }
      return acc;
    });
  }
  return DiffOp::order1(std::move(A), std::move(B));
}

inline MatrixFn scalar_fn(int dim, double mass, bool internal_mass) {
  return MatrixFn(dim, [dim, mass, internal_mass](const auto& pt) {
    using S = typename std::decay_t<decltype(pt)>::scalar_type;
    const S v = internal_mass ? mass_internal(pt, mass) : energy_total(pt, mass);
    return DMat<S>::scalar(dim, v);
  });
}

inline GeneratorSet build_set(const TwoBodyParams& params, GeneratorSet::Kind kind) {
  params.validate();
  GeneratorSet g;
  g.kind = kind;
  g.params = params;
  g.dim = kind == GeneratorSet::Kind::ScalarModel ? 1 : 8;
  const double m = params.total_mass();
  const auto& kk = CliffordConstants::get();

  g.E_fn = scalar_fn(g.dim, m, false);
  g.M_fn = scalar_fn(g.dim, m, true);

  MatrixFn P0fn;
  switch (kind) {
    case GeneratorSet::Kind::Raw:
      P0fn = free_hamiltonian_fn(m);
      break;
    case GeneratorSet::Kind::Canonical:
      P0fn = MatrixFn(8, [m](const auto& pt) {
        using S = typename std::decay_t<decltype(pt)>::scalar_type;
        return lift_matrix<S>(CliffordConstants::get().gamma0) * energy_total(pt, m);
      });
      break;
    case GeneratorSet::Kind::ScalarModel:
      P0fn = g.E_fn;
      break;
  }
  g.P0 = DiffOp::multiplication(P0fn);
  for (int a = 0; a < 3; ++a) g.P[a] = DiffOp::momentum(a + 1, g.dim);

  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int j = 0; j < 3; ++j) {
    const int a0 = pairs[j][0], b0 = pairs[j][1];
    const ComplexMatrix Sab = kind == GeneratorSet::Kind::ScalarModel
                                  ? ComplexMatrix::Zero(1, 1)
                                  : kk.spins.S[a0][b0];
    g.Jpair[j] = rotation_op(a0, b0, Sab, g.dim);
  }

  // spin rows entering J_0a: S^(2) for the raw set, full S for the canonical
  // set, none for the scalar model
  static const auto spin_rows = [] {
    const auto& s = CliffordConstants::get().spins;
    std::array<std::array<std::array<ComplexMatrix, 3>, 3>, 2> rows;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        rows[0][a][b] = s.S2[a][b];  // raw
        rows[1][a][b] = s.S[a][b];   // canonical
      }
    return rows;
  }();

  for (int a = 0; a < 3; ++a) {
    const std::array<ComplexMatrix, 3>* row = nullptr;
    if (kind == GeneratorSet::Kind::Raw) row = &spin_rows[0][a];
    if (kind == GeneratorSet::Kind::Canonical) row = &spin_rows[1][a];
    g.K[a] = boost_op(a, P0fn, row, m, g.dim);
  }
  return g;
}

}  // namespace detail

/// Generators of Eqs.-as-printed form: P0 = H, P_a = p_a,
/// J_ab = M_ab + m_ab + S_ab, J_0a with the S^(2) spin row.
inline GeneratorSet generators_raw(const TwoBodyParams& params) {
  if (params.mode != MassMode::EqualMass)
    throw std::invalid_argument("generators_raw: equal-mass mode required");
  return detail::build_set(params, GeneratorSet::Kind::Raw);
}

/// Canonical (Foldy-form) generators: P0 = Gamma_0 E, same J_ab, boosts with
/// the full spin row S over (E+M).
inline GeneratorSet generators_canonical(const TwoBodyParams& params) {
  if (params.mode != MassMode::EqualMass)
    throw std::invalid_argument("generators_canonical: equal-mass mode required");
  return detail::build_set(params, GeneratorSet::Kind::Canonical);
}

/// Spinless single-sector model (1x1 coefficients) used to measure the
/// structure-constant table by brute force before asserting it on the
/// matrix sets.
inline GeneratorSet generators_scalar_model(const TwoBodyParams& params) {
  return detail::build_set(params, GeneratorSet::Kind::ScalarModel);
}

/// conjugate(U, G_raw) compared against G_canonical, one report per
/// generator.  Mismatches are data, never a throw: the J_0a rows are
/// published as findings.
struct EquivalenceReport {
  std::vector<ResidualReport> reports;  // one per generator, index order
  std::vector<bool> report_only;        // true = finding row (J_0a)
  bool hard_pass = true;
};

inline EquivalenceReport equivalence_check(const GeneratorSet& raw, const GeneratorSet& canonical,
                                           const MatrixFn& U,
                                           const std::vector<MomentumPoint>& points,
                                           double tol = 1e-9) {
  EquivalenceReport rep;
  for (int i = 0; i < 10; ++i) {
    const DiffOp conj_raw = conjugate(U, raw.by_index(i));
    ResidualReport r = op_equal_at(conj_raw, canonical.by_index(i), points, tol,
                                   std::string("equivalence/") + kGeneratorNames[i]);
    const bool finding = i >= 7;  // boost rows: spec leaves Eq-6-vs-9 open
    rep.report_only.push_back(finding);
    if (!finding) rep.hard_pass = rep.hard_pass && r.pass;
    rep.reports.push_back(std::move(r));
  }
  return rep;
}

}  // namespace twobody
