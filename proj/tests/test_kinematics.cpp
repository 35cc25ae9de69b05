#include <catch2/catch_amalgamated.hpp>

#include "twobody/kinematics.hpp"
#include "twobody/rng.hpp"

using namespace twobody;
using namespace twobody::kinematics;

TEST_CASE("invariant mass", "[kinematics]") {
  REQUIRE(invariant_mass(0.0, 1.0, 2.0) == 3.0);
  // m1=1, m2=2, K=(0,0,1): sqrt(2) + sqrt(5), frozen from direct evaluation
  REQUIRE(invariant_mass({0, 0, 1}, 1.0, 2.0) ==
          Catch::Approx(3.6502815398728847).epsilon(1e-15));
  // equal masses m1 = m2 = m/2: M^2 = m^2 + 4 K^2
  const double m = 3.0, k2 = 1.7;
  const double M = invariant_mass(k2, m / 2, m / 2);
  REQUIRE(M * M == Catch::Approx(m * m + 4 * k2).epsilon(1e-15));
}

TEST_CASE("total energy", "[kinematics]") {
  REQUIRE(total_energy({0, 0, 0}, {0.3, 0.4, 0.5}, 1.0, 2.0) ==
          Catch::Approx(invariant_mass({0.3, 0.4, 0.5}, 1.0, 2.0)).epsilon(1e-16));
  // 3-4-5 right triangle: masses 2+2, K=0 gives M=4
  REQUIRE(total_energy({3, 0, 0}, {0, 0, 0}, 2.0, 2.0) == 5.0);
  Rng rng(kDefaultSeed);
  for (int i = 0; i < 100; ++i) {
    const std::array<double, 3> P{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const std::array<double, 3> K{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const double M = invariant_mass(K, 1.3, 0.4);
    const double E = total_energy(P, K, 1.3, 0.4);
    REQUIRE(E == Catch::Approx(std::sqrt(P[0] * P[0] + P[1] * P[1] + P[2] * P[2] + M * M))
                     .epsilon(1e-15));
    REQUIRE(E >= M);
  }
}

TEST_CASE("K prime squared", "[kinematics]") {
  REQUIRE(kprime_sq(0.0, 1.0, 2.0) == 0.0);
  SECTION("equal masses reduce to K^2") {
    Rng rng(kDefaultSeed ^ 1);
    for (int i = 0; i < 200; ++i) {
      const double mu = rng.uniform(0.1, 5.0);
      const double k2 = rng.uniform(0.0, 25.0);
      REQUIRE(kprime_sq(k2, mu, mu) == Catch::Approx(k2).epsilon(1e-14).margin(1e-300));
    }
  }
  SECTION("frozen value at m1=1, m2=2, K^2=1 against the raw-form oracle") {
    // raw form: -m1 m2 + m1 m2/(m1+m2)^2 (sqrt(m1^2+K^2)+sqrt(m2^2+K^2))^2
    const double M = std::sqrt(2.0) + std::sqrt(5.0);
    const double raw = -2.0 + (2.0 / 9.0) * M * M;
    REQUIRE(raw == Catch::Approx(0.9610122934081682).epsilon(1e-14));
    REQUIRE(kprime_sq(1.0, 1.0, 2.0) == Catch::Approx(raw).epsilon(1e-13));
  }
  SECTION("rearranged form beats the raw form near threshold") {
    const double k2 = 1e-9;
    const double stable = kprime_sq(k2, 1.0, 2.0);
    REQUIRE(stable > 0);
    // the raw form loses ~7 digits to cancellation here; a long-double
    // evaluation of the raw expression keeps ~10 relative digits, which the
    // stable double-precision form must reproduce
    const long double m1 = 1.0L, m2 = 2.0L, k2l = 1e-9L;
    const long double Ml = std::sqrt(m1 * m1 + k2l) + std::sqrt(m2 * m2 + k2l);
    const long double rawl = -m1 * m2 + m1 * m2 / ((m1 + m2) * (m1 + m2)) * Ml * Ml;
    REQUIRE(stable == Catch::Approx(static_cast<double>(rawl)).epsilon(1e-9));
  }
}

TEST_CASE("mass from K prime and the round trip", "[kinematics]") {
  REQUIRE(mass_from_kprime(0.0, 1.0, 2.0) == 3.0);
  REQUIRE_THROWS_AS(mass_from_kprime(-0.1, 1.0, 2.0), domain_error);
  // equal masses, K^2 = 1, total m = 2 (mu = 1): M = 2 sqrt(2)
  REQUIRE(mass_from_kprime(kprime_sq(1.0, 1.0, 1.0), 1.0, 1.0) ==
          Catch::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));

  Rng rng(kDefaultSeed ^ 2);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double m1 = rng.uniform(0.1, 5.0), m2 = rng.uniform(0.1, 5.0);
    const double k2 = rng.uniform(0.0, 25.0);
    const double M1 = invariant_mass(k2, m1, m2);
    const double M15 = mass_from_kprime(kprime_sq(k2, m1, m2), m1, m2);
    worst = std::max(worst, std::abs(M15 - M1) / M1);
  }
  REQUIRE(worst <= 1e-14);
}

TEST_CASE("unequal-mass dispersion", "[kinematics]") {
  REQUIRE(dispersion_unequal({0, 0, 0}, 0.0, 1.0, 2.0) == 9.0);
  REQUIRE_THROWS_AS(dispersion_unequal({0, 0, 0}, -1.0, 1.0, 2.0), domain_error);
  Rng rng(kDefaultSeed ^ 3);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double m1 = rng.uniform(0.1, 5.0), m2 = rng.uniform(0.1, 5.0);
    const std::array<double, 3> P{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const std::array<double, 3> K{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const double E = total_energy(P, K, m1, m2);
    const double E2 = dispersion_unequal(P, kprime_sq(K, m1, m2), m1, m2);
    worst = std::max(worst, std::abs(E2 - E * E) / (E * E));
  }
  REQUIRE(worst <= 1e-14);
}

TEST_CASE("properties: positivity, monotonicity, mass exchange", "[kinematics]") {
  Rng rng(kDefaultSeed ^ 4);
  double minval = 0;
  for (int i = 0; i < 100000; ++i) {
    const double m1 = std::exp(rng.uniform(std::log(0.01), std::log(50.0)));
    const double m2 = std::exp(rng.uniform(std::log(0.01), std::log(50.0)));
    const double k2 = std::exp(rng.uniform(std::log(1e-12), std::log(1e4)));
    const double v = kprime_sq(k2, m1, m2);
    minval = std::min(minval, v);
    if (i % 1000 == 0) REQUIRE(kprime_sq(k2, m2, m1) == v);
  }
  REQUIRE(minval >= 0.0);

  double prev = kprime_sq(0.0, 1.0, 2.0);
  for (int i = 1; i <= 500; ++i) {
    const double cur = kprime_sq(i * 0.02, 1.0, 2.0);
    REQUIRE(cur > prev);
    prev = cur;
  }
}
