#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "twobody/dual.hpp"
#include "twobody/rng.hpp"

namespace twobody {

/// Thrown when an operator coefficient is evaluated at a singular point;
/// the message names the offending factor.
class domain_error : public std::runtime_error {
 public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

enum class MassMode { EqualMass, UnequalMass };

/// Two-body parameters.  In equal-mass mode the paper's m is the TOTAL
/// mass of the pair: m1 = m2 = m/2.  Natural units, hbar = c = 1.
struct TwoBodyParams {
  MassMode mode = MassMode::EqualMass;
  double m = 2.0;      // total mass (equal-mass mode)
  double m1 = 1.0;     // component masses (unequal mode)
  double m2 = 1.0;
  double e2 = 0.3;     // coupling e^2

  static TwoBodyParams equal_mass(double total_mass, double coupling = 0.3) {
    TwoBodyParams p;
    p.mode = MassMode::EqualMass;
    p.m = total_mass;
    p.m1 = p.m2 = 0.5 * total_mass;
    p.e2 = coupling;
    return p;
  }
  static TwoBodyParams unequal_mass(double ma, double mb, double coupling = 0.3) {
    TwoBodyParams p;
    p.mode = MassMode::UnequalMass;
    p.m1 = ma;
    p.m2 = mb;
    p.m = ma + mb;
    p.e2 = coupling;
    return p;
  }

  double total_mass() const { return mode == MassMode::EqualMass ? m : m1 + m2; }

  void validate() const {
    if (mode == MassMode::EqualMass) {
      if (!(m > 0)) throw domain_error("TwoBodyParams: total mass must be > 0");
    } else {
      if (!(m1 > 0) || !(m2 > 0)) throw domain_error("TwoBodyParams: masses must be > 0");
    }
  }
};

/// Six-momentum sample point (p_1..p_6), explicit time parameter and the
/// two-body parameters, generic over the scalar type so coefficient
/// functions differentiate through it.
template <class S>
struct PointT {
  using scalar_type = S;
  std::array<S, 6> p{};
  double t = 0.0;
  TwoBodyParams params;
};

using MomentumPoint = PointT<double>;

inline MomentumPoint make_point(const std::array<double, 6>& p, const TwoBodyParams& params,
                                double t = 0.0) {
  MomentumPoint q;
  q.p = p;
  q.t = t;
  q.params = params;
  for (double x : q.p)
    if (!std::isfinite(x)) throw domain_error("MomentumPoint: momentum component not finite");
  return q;
}

/// Lift a plain point to the base complex scalar.
inline PointT<C0> lift_point(const MomentumPoint& q) {
  PointT<C0> r;
  for (int a = 0; a < 6; ++a) r.p[a] = q.p[a];
  r.t = q.t;
  r.params = q.params;
  return r;
}

/// Seed a point one dual level up: p_A gains a unit derivative in slot A.
template <class S>
PointT<Dual<S>> seed_point(const PointT<S>& q) {
  PointT<Dual<S>> r;
  for (int a = 0; a < 6; ++a) {
    r.p[a].v = q.p[a];
    r.p[a].d[a] = lift_scalar<S>(1.0);
  }
  r.t = q.t;
  r.params = q.params;
  return r;
}

// -- scalar coefficient functions of the equal-mass system --
// E = sqrt(p_1..6^2 + m^2), M = sqrt(m^2 + p_4..6^2); m is the total mass.

template <class S>
S energy_total(const PointT<S>& q, double mass) {
  using std::sqrt;
  using twobody::sqrt;
  S acc = lift_scalar<S>(mass * mass);
  for (int a = 0; a < 6; ++a) acc = acc + q.p[a] * q.p[a];
  return sqrt(acc);
}
template <class S>
S energy_total(const PointT<S>& q) { return energy_total(q, q.params.total_mass()); }

template <class S>
S mass_internal(const PointT<S>& q, double mass) {
  using std::sqrt;
  using twobody::sqrt;
  S acc = lift_scalar<S>(mass * mass);
  for (int a = 3; a < 6; ++a) acc = acc + q.p[a] * q.p[a];
  return sqrt(acc);
}
template <class S>
S mass_internal(const PointT<S>& q) { return mass_internal(q, q.params.total_mass()); }

/// Reciprocal with a singularity guard that names the factor.
template <class S>
S guarded_inverse(const S& x, const char* factor) {
  if (std::abs(value_of(x)) < 1e-300)
    throw domain_error(std::string("singular factor 1/(") + factor + ")");
  return lift_scalar<S>(1.0) / x;
}

/// Sample battery per the sampling design: p = 0 first, then one
/// axis-aligned point per axis, then uniform draws in [-box, box]^6.
inline std::vector<MomentumPoint> sample_momenta(int count, std::uint64_t seed,
                                                 const TwoBodyParams& params, double box = 3.0,
                                                 double t = 0.0) {
  std::vector<MomentumPoint> pts;
  pts.reserve(count);
  pts.push_back(make_point({0, 0, 0, 0, 0, 0}, params, t));
  for (int a = 0; a < 6 && static_cast<int>(pts.size()) < count; ++a) {
    std::array<double, 6> p{};
    p[a] = 0.5 * box;
    pts.push_back(make_point(p, params, t));
  }
  Rng rng(seed);
  while (static_cast<int>(pts.size()) < count)
    pts.push_back(make_point(rng.uniform6(-box, box), params, t));
  return pts;
}

}  // namespace twobody
