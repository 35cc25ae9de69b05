#pragma once

#include <stdexcept>
#include <vector>

#include "twobody/linalg.hpp"

namespace twobody {

/// Standard Pauli matrix sigma_a, a in 1..3.
inline ComplexMatrix pauli(int a) {
  ComplexMatrix m(2, 2);
  const cplx i(0, 1);
  switch (a) {
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::out_of_range("pauli: index must be 1..3");
  }
  return m;
}

/// The 4x4 s_a matrices, exactly as displayed below the Gamma representation.
inline ComplexMatrix spin_s(int a) {
  ComplexMatrix m(4, 4);
  const cplx i(0, 1);
  switch (a) {
    case 1:
      m << 0, 1, 0, 0,
           1, 0, 0, 0,
           0, 0, 0, -i,
           0, 0, i, 0;
      break;
    case 2:
      m << 0, 0, 1, 0,
           0, 0, 0, i,
           1, 0, 0, 0,
           0, -i, 0, 0;
      break;
    case 3:
      m << 0, 0, 0, 1,
           0, 0, -i, 0,
           0, i, 0, 0,
           1, 0, 0, 0;
      break;
    default: throw std::out_of_range("spin_s: index must be 1..3");
  }
  return 0.5 * m;
}

/// The 4x4 tau_a matrices; they commute with every s_a.
inline ComplexMatrix spin_tau(int a) {
  ComplexMatrix m(4, 4);
  const cplx i(0, 1);
  switch (a) {
    case 1:
      m << 0, -1, 0, 0,
           -1, 0, 0, 0,
           0, 0, 0, -i,
           0, 0, i, 0;
      break;
    case 2:
      m << 0, 0, -1, 0,
           0, 0, 0, i,
           -1, 0, 0, 0,
           0, -i, 0, 0;
      break;
    case 3:
      m << 0, 0, 0, -1,
           0, 0, -i, 0,
           0, i, 0, 0,
           -1, 0, 0, 0;
      break;
    default: throw std::out_of_range("spin_tau: index must be 1..3");
  }
  return 0.5 * m;
}

/// Ordered set of mutually anticommuting matrices with its metric signature:
/// {Gamma_mu, Gamma_nu} = 2 g_mu_nu I.
struct GammaSet {
  int dim = 0;
  std::vector<ComplexMatrix> gammas;  // Gamma_0 .. Gamma_6 (.. Gamma_7 for dim 16)
  std::vector<double> metric;         // +1, -1, -1, ...

  const ComplexMatrix& gamma(int mu) const { return gammas.at(mu); }
  int count() const { return static_cast<int>(gammas.size()); }

  /// Max |{Gm,Gn} - 2 g_mn I| over all pairs; the Clifford residual.
  double clifford_residual() const {
    const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
    double worst = 0;
    for (int mu = 0; mu < count(); ++mu)
      for (int nu = 0; nu < count(); ++nu) {
        const double g = (mu == nu) ? metric[mu] : 0.0;
        worst = std::max(worst,
                         max_abs(gammas[mu] * gammas[nu] + gammas[nu] * gammas[mu] - 2.0 * g * id));
      }
    return worst;
  }

  /// Gamma_0 Hermitian, the rest anti-Hermitian (so Gamma_0 Gamma_A is Hermitian).
  double hermiticity_pattern_residual() const {
    double worst = hermiticity_residual(gammas[0]);
    for (int a = 1; a < count(); ++a)
      worst = std::max(worst, antihermiticity_residual(gammas[a]));
    return worst;
  }
};

/// The 8x8 set: Gamma_0 = sigma_3 x 1, Gamma_a = 2i sigma_2 x s_a,
/// Gamma_{a+3} = 2i sigma_1 x tau_a.  Signature (1,6).
inline GammaSet gamma8() {
  GammaSet g;
  g.dim = 8;
  g.metric = {1, -1, -1, -1, -1, -1, -1};
  const cplx i2(0, 2);
  g.gammas.push_back(kron(pauli(3), ComplexMatrix::Identity(4, 4)));
  for (int a = 1; a <= 3; ++a) g.gammas.push_back(i2 * kron(pauli(2), spin_s(a)));
  for (int a = 1; a <= 3; ++a) g.gammas.push_back(i2 * kron(pauli(1), spin_tau(a)));
  return g;
}

/// Chirality element Gamma_0 Gamma_1 ... Gamma_6 of the 8x8 set (central,
/// proportional to the identity; comes out as -i I).
inline ComplexMatrix gamma8_chirality(const GammaSet& g8) {
  ComplexMatrix w = g8.gamma(0);
  for (int mu = 1; mu <= 6; ++mu) w = w * g8.gamma(mu);
  return w;
}

/// The 16x16 set by the doubling construction: Gamma_mu -> sigma_3 x Gamma_mu
/// for mu = 0..6 and Gamma_7 = sigma_1 x (chirality of the 8x8 set).
/// Signature (1,7).  Any representation satisfying the algebra is equivalent
/// for the identities checked downstream.
inline GammaSet gamma16() {
  const GammaSet g8 = gamma8();
  GammaSet g;
  g.dim = 16;
  g.metric = {1, -1, -1, -1, -1, -1, -1, -1};
  for (int mu = 0; mu <= 6; ++mu) g.gammas.push_back(kron(pauli(3), g8.gamma(mu)));
  g.gammas.push_back(kron(pauli(1), gamma8_chirality(g8)));
  return g;
}

/// Spin tensors S^(1), S^(2) and their sum, indexed a,b in 1..3 (stored 0-based).
struct SpinTensorSet {
  std::array<std::array<ComplexMatrix, 3>, 3> S1, S2, S;

  /// The identification S^(2)_{a+3,b+3} == S^(2)_{ab} used by the extra-axis
  /// position operator: same matrices, extra-axis index labels.
  const ComplexMatrix& S2_extra(int a0, int b0) const { return S2[a0][b0]; }
};

/// S^(1)_ab = (i/4)[Gamma_a, Gamma_b], S^(2)_ab = (i/4)[Gamma_{a+3}, Gamma_{b+3}].
inline SpinTensorSet spin_tensors(const GammaSet& g8) {
  if (g8.dim != 8) throw std::invalid_argument("spin_tensors: expects the 8x8 set");
  SpinTensorSet s;
  const cplx iq(0, 0.25);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      s.S1[a][b] = iq * (g8.gamma(1 + a) * g8.gamma(1 + b) - g8.gamma(1 + b) * g8.gamma(1 + a));
      s.S2[a][b] = iq * (g8.gamma(4 + a) * g8.gamma(4 + b) - g8.gamma(4 + b) * g8.gamma(4 + a));
      s.S[a][b] = s.S1[a][b] + s.S2[a][b];
    }
  return s;
}

/// Spin Casimir S^2 = sum_c (1/2 eps_cab S_ab)^2; spectrum {0 x2, 2 x6}
/// -- the two spin states s = 0 and s = 1.
inline ComplexMatrix spin_casimir(const SpinTensorSet& s) {
  // S_1 = S_23, S_2 = S_31, S_3 = S_12
  const ComplexMatrix sv[3] = {s.S[1][2], s.S[2][0], s.S[0][1]};
  ComplexMatrix c = ComplexMatrix::Zero(8, 8);
  for (const auto& m : sv) c += m * m;
  return c;
}

}  // namespace twobody
