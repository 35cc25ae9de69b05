#pragma once

#include <array>
#include <cmath>

#include "twobody/params.hpp"

namespace twobody {
namespace kinematics {

/// Invariant mass M = sqrt(m1^2 + K^2) + sqrt(m2^2 + K^2).
inline double invariant_mass(double k_sq, double m1, double m2) {
  return std::sqrt(m1 * m1 + k_sq) + std::sqrt(m2 * m2 + k_sq);
}
inline double invariant_mass(const std::array<double, 3>& K, double m1, double m2) {
  return invariant_mass(K[0] * K[0] + K[1] * K[1] + K[2] * K[2], m1, m2);
}

/// Total energy E = sqrt(P^2 + M^2).
inline double total_energy(const std::array<double, 3>& P, const std::array<double, 3>& K,
                           double m1, double m2) {
  const double M = invariant_mass(K, m1, m2);
  return std::sqrt(P[0] * P[0] + P[1] * P[1] + P[2] * P[2] + M * M);
}

/// K'^2 = -m1 m2 + m1 m2 / (m1+m2)^2 * (sqrt(m1^2+K^2) + sqrt(m2^2+K^2))^2.
/// Evaluated as a difference-of-squares product to avoid the cancellation
/// near K = 0:
///   K'^2 = m1 m2/(m1+m2)^2 * (M + m1 + m2) * K^2 *
///          [1/(sqrt(m1^2+K^2)+m1) + 1/(sqrt(m2^2+K^2)+m2)].
inline double kprime_sq(double k_sq, double m1, double m2) {
  const double r1 = std::sqrt(m1 * m1 + k_sq);
  const double r2 = std::sqrt(m2 * m2 + k_sq);
  const double M = r1 + r2;
  const double msum = m1 + m2;
  const double diff = k_sq * (1.0 / (r1 + m1) + 1.0 / (r2 + m2));  // = M - (m1+m2)
  return (m1 * m2) / (msum * msum) * (M + msum) * diff;
}
inline double kprime_sq(const std::array<double, 3>& K, double m1, double m2) {
  return kprime_sq(K[0] * K[0] + K[1] * K[1] + K[2] * K[2], m1, m2);
}

/// M = (m1+m2)/sqrt(m1 m2) * sqrt(m1 m2 + K'^2).
inline double mass_from_kprime(double kprime_squared, double m1, double m2) {
  if (kprime_squared < 0) throw domain_error("mass_from_kprime: K'^2 must be >= 0");
  return (m1 + m2) / std::sqrt(m1 * m2) * std::sqrt(m1 * m2 + kprime_squared);
}

/// E^2 = P^2 + (m1+m2)^2/(m1 m2) K'^2 + (m1+m2)^2.
inline double dispersion_unequal(const std::array<double, 3>& P, double kprime_squared,
                                 double m1, double m2) {
  if (kprime_squared < 0) throw domain_error("dispersion_unequal: K'^2 must be >= 0");
  const double msum = m1 + m2;
  return P[0] * P[0] + P[1] * P[1] + P[2] * P[2] + msum * msum / (m1 * m2) * kprime_squared +
         msum * msum;
}

}  // namespace kinematics
}  // namespace twobody
