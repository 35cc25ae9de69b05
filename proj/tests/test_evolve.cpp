#include <catch2/catch_amalgamated.hpp>

#include "twobody/evolve.hpp"

using namespace twobody;

namespace {
const TwoBodyParams kParams = TwoBodyParams::equal_mass(2.0);

GridSpec small_spec(int axis = 4, int n = 64, double L = 32.0, double dt = 0.02) {
  GridSpec s;
  s.active_axes = {axis};
  s.n = {n};
  s.L = {L};
  s.dt = dt;
  s.steps = 100;
  return s;
}
}  // namespace

TEST_CASE("grid spec validation", "[evolve]") {
  GridSpec s = small_spec();
  REQUIRE_NOTHROW(s.validate());
  s.n = {100};
  REQUIRE_THROWS_AS(s.validate(), std::invalid_argument);  // not a power of two
  s = small_spec();
  s.active_axes = {1, 2, 3, 4};
  REQUIRE_THROWS_AS(s.validate(), std::invalid_argument);
  s = small_spec();
  s.active_axes = {1, 2, 3};
  s.n = {512, 512, 512};  // 2^27 sites
  s.L = {10, 10, 10};
  REQUIRE_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("gaussian initialization", "[evolve]") {
  const GridSpec spec = small_spec();
  SECTION("normalized; projected modes stay in the positive subspace") {
    GridState st =
        init_gaussian(spec, kParams, {16.0}, {0.8}, {2.5}, ComponentMode::PositiveEnergy);
    REQUIRE(std::abs(st.norm() - 1.0) <= 1e-13);
    SpectralEngine fft(spec);
    auto hat = st.psi;
    fft.forward(hat);
    for (long s = 0; s < spec.sites(); ++s) {
      const ComplexMatrix pp =
          positive_projector_value(hamiltonian_value(kParams, spec.mode_momentum(s)));
      Eigen::Matrix<cplx, 8, 1> v;
      for (int c = 0; c < kSpinor; ++c) v[c] = hat[s * kSpinor + c];
      REQUIRE(((ComplexMatrix::Identity(8, 8) - pp) * v).norm() <= 1e-12);
    }
  }
  SECTION("raw packet projected afterwards equals the positive-energy packet") {
    GridState raw = init_gaussian(spec, kParams, {16.0}, {0.8}, {2.5}, ComponentMode::RawSpinor);
    GridState pos =
        init_gaussian(spec, kParams, {16.0}, {0.8}, {2.5}, ComponentMode::PositiveEnergy);
    SpectralEngine fft(spec);
    fft.forward(raw.psi);
    for (long s = 0; s < spec.sites(); ++s) {
      const ComplexMatrix pp =
          positive_projector_value(hamiltonian_value(kParams, spec.mode_momentum(s)));
      Eigen::Matrix<cplx, 8, 1> v;
      for (int c = 0; c < kSpinor; ++c) v[c] = raw.psi[s * kSpinor + c];
      v = (pp * v).eval();
      for (int c = 0; c < kSpinor; ++c) raw.psi[s * kSpinor + c] = v[c];
    }
    fft.backward(raw.psi);
    const double nrm = raw.norm();
    double w = 0;
    for (size_t i = 0; i < raw.psi.size(); ++i)
      w = std::max(w, std::abs(raw.psi[i] / nrm - pos.psi[i]));
    REQUIRE(w <= 1e-12);
  }
  SECTION("under-resolved packets and off-box centers are rejected") {
    REQUIRE_THROWS_AS(
        init_gaussian(spec, kParams, {16.0}, {0.0}, {0.4}, ComponentMode::PositiveEnergy),
        std::invalid_argument);
    REQUIRE_THROWS_AS(
        init_gaussian(spec, kParams, {40.0}, {0.0}, {2.5}, ComponentMode::PositiveEnergy),
        std::invalid_argument);
  }
}

TEST_CASE("fourier round trip", "[evolve]") {
  GridSpec spec;
  spec.active_axes = {2, 5};
  spec.n = {16, 32};
  spec.L = {9.0, 13.0};
  spec.dt = 0.01;
  SpectralEngine fft(spec);
  std::vector<cplx> psi(spec.sites() * kSpinor);
  Rng rng(kDefaultSeed ^ 0x70);
  for (auto& z : psi) z = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  auto copy = psi;
  fft.forward(copy);
  fft.backward(copy);
  double w = 0;
  for (size_t i = 0; i < psi.size(); ++i) w = std::max(w, std::abs(copy[i] - psi[i]));
  REQUIRE(w <= 1e-13);
}

TEST_CASE("per-mode exponential is unitary", "[evolve]") {
  const GridSpec spec = small_spec();
  const ComplexMatrix id = ComplexMatrix::Identity(8, 8);
  double w = 0;
  for (long s = 0; s < spec.sites(); ++s) {
    const auto k = spec.mode_momentum(s);
    const ComplexMatrix h = hamiltonian_value(kParams, k);
    const double E = dispersion_value(kParams, k);
    const ComplexMatrix u = std::cos(E * spec.dt) * id - cplx(0, 1) * std::sin(E * spec.dt) / E * h;
    w = std::max(w, max_abs(u * u.adjoint() - id));
  }
  REQUIRE(w <= 1e-12);
}

TEST_CASE("plane-wave eigenmode picks up exactly exp(-i E T)", "[evolve]") {
  GridSpec spec = small_spec(4, 32, 16.0, 0.05);
  GridState pw;
  pw.spec = spec;
  pw.params = kParams;
  pw.psi.assign(spec.sites() * kSpinor, cplx(0, 0));
  const double k = spec.wavenumber(0, 5);
  std::array<double, 6> k6{};
  k6[3] = k;
  const ComplexMatrix pp = positive_projector_value(hamiltonian_value(kParams, k6));
  Eigen::Matrix<cplx, 8, 1> chi = pp * Eigen::Matrix<cplx, 8, 1>::Ones();
  chi.normalize();
  for (long s = 0; s < spec.sites(); ++s) {
    const cplx ph = std::exp(cplx(0, k * spec.coord(0, static_cast<int>(s))));
    for (int c = 0; c < kSpinor; ++c) pw.psi[s * kSpinor + c] = ph * chi[c];
  }
  const double nrm = pw.norm();
  for (auto& z : pw.psi) z /= nrm;

  Evolution ev(pw);
  const auto before = ev.state().psi;
  const int N = 23;
  for (int i = 0; i < N; ++i) ev.step();
  const cplx phase = std::exp(cplx(0, -dispersion_value(kParams, k6) * spec.dt * N));
  double w = 0;
  for (size_t i = 0; i < before.size(); ++i)
    w = std::max(w, std::abs(ev.state().psi[i] - phase * before[i]));
  REQUIRE(w <= 1e-12);
}

TEST_CASE("free packet: conservation and group velocity", "[evolve]") {
  GridSpec spec;
  spec.active_axes = {4};
  spec.n = {256};
  spec.L = {112.0};
  spec.dt = 0.02;
  spec.steps = 1000;
  const double k0 = 1.0, sigma = 12.0, x0 = 51.0;
  check_wraparound(spec, kParams, {x0}, {k0}, {sigma}, spec.dt * spec.steps);
  GridState st = init_gaussian(spec, kParams, {x0}, {k0}, {sigma}, ComponentMode::PositiveEnergy);
  Evolution ev(std::move(st));
  const auto snaps = ev.run(spec.steps, 100);
  std::array<double, 6> kc{};
  kc[3] = k0;
  const DiagnoseReport d = diagnose(snaps, kParams, spec, kc);
  REQUIRE(d.norm_drift <= 1e-10);
  REQUIRE(d.energy_drift <= 1e-10);
  REQUIRE(d.pos_fraction_min >= 1.0 - 1e-10);
  REQUIRE(d.max_velocity_rel_error <= 1e-3);
  REQUIRE(d.subluminal);
  REQUIRE(std::abs(d.predicted_velocity[3] - k0 / std::sqrt(k0 * k0 + kParams.m * kParams.m)) <=
          1e-14);
}

TEST_CASE("zero-momentum packet is stationary", "[evolve]") {
  GridSpec spec = small_spec(5, 128, 64.0, 0.05);
  GridState st = init_gaussian(spec, kParams, {32.0}, {0.0}, {4.0}, ComponentMode::PositiveEnergy);
  Evolution ev(std::move(st));
  const auto snaps = ev.run(200, 50);
  for (const auto& s : snaps)
    REQUIRE(std::abs(s.centroid[4] - snaps.front().centroid[4]) <= 1e-6);
}

TEST_CASE("diagnose requires at least two snapshots", "[evolve]") {
  GridSpec spec = small_spec();
  REQUIRE_THROWS_AS(diagnose({Snapshot{}}, kParams, spec, {}), std::invalid_argument);
}

TEST_CASE("wraparound guard", "[evolve]") {
  GridSpec spec = small_spec(4, 64, 32.0, 0.02);
  // moving packet, long run: would cross the 4-sigma margin
  REQUIRE_THROWS_AS(check_wraparound(spec, kParams, {16.0}, {1.0}, {3.0}, 200.0),
                    std::invalid_argument);
  REQUIRE_NOTHROW(check_wraparound(spec, kParams, {16.0}, {1.0}, {0.9}, 2.0));
}

TEST_CASE("Strang splitting is second order against the exact constant-A run", "[evolve]") {
  GridSpec base;
  base.active_axes = {1};
  base.n = {64};
  base.L = {20.0};
  const TwoBodyParams p1 = TwoBodyParams::equal_mass(1.0);
  const double charge = 1.0, aval = 0.8, T = 1.0;
  const FieldSpec fields = FieldSpec::constant({aval, 0, 0, 0, 0, 0}, charge);

  auto strang_run = [&](int nsteps) {
    GridSpec sp = base;
    sp.dt = T / nsteps;
    GridState st = init_gaussian(sp, p1, {10.0}, {1.0}, {1.5}, ComponentMode::RawSpinor);
    Evolution ev(std::move(st), fields);
    REQUIRE(ev.stepper() == Evolution::Stepper::Strang);
    for (int i = 0; i < nsteps; ++i) ev.step();
    return ev.state().psi;
  };
  GridSpec sp = base;
  sp.dt = T;
  GridState st = init_gaussian(sp, p1, {10.0}, {1.0}, {1.5}, ComponentMode::RawSpinor);
  Evolution exact(std::move(st));
  exact.set_constant_shift({charge * aval, 0, 0, 0, 0, 0});
  exact.step();
  const auto& ref = exact.state().psi;

  auto l2err = [&](const std::vector<cplx>& a) {
    double e = 0;
    for (size_t i = 0; i < a.size(); ++i) e += std::norm(a[i] - ref[i]);
    return std::sqrt(e);
  };
  const double e1 = l2err(strang_run(100));
  const double e2 = l2err(strang_run(200));
  REQUIRE(e1 / e2 >= 3.5);
  REQUIRE(e1 / e2 <= 4.5);
}

TEST_CASE("unequal-mass evolution conserves norm and energy", "[evolve]") {
  const TwoBodyParams up = TwoBodyParams::unequal_mass(1.0, 2.0);
  GridSpec spec = small_spec(5, 128, 64.0, 0.02);
  GridState st = init_gaussian(spec, up, {32.0}, {0.6}, {4.0}, ComponentMode::PositiveEnergy);
  Evolution ev(std::move(st));
  const auto snaps = ev.run(200, 40);
  const DiagnoseReport d = diagnose(snaps, up, spec, {0, 0, 0, 0, 0.6, 0});
  REQUIRE(d.norm_drift <= 1e-11);
  REQUIRE(d.energy_drift <= 1e-11);
  // lambda^2 K'/E' dispersion slope
  const double lam2 = 9.0 / 2.0;
  const double E = std::sqrt(9.0 + lam2 * 0.36);
  REQUIRE(std::abs(d.predicted_velocity[4] - lam2 * 0.6 / E) <= 1e-14);
}
