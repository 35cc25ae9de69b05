#include <catch2/catch_amalgamated.hpp>

#include "twobody/interaction.hpp"

using namespace twobody;

namespace {
const TwoBodyParams kParams = TwoBodyParams::equal_mass(2.0);
}

TEST_CASE("frozen-radius interaction Hamiltonian", "[interaction]") {
  SECTION("zero potential reduces to the free Hamiltonian") {
    const MatrixFn hv = hamiltonian_V(kParams, PotentialSpec::zero(), 1.3);
    const MatrixFn hf = free_hamiltonian_fn(kParams.m);
    for (const auto& q : sample_momenta(10, kDefaultSeed ^ 0x60, kParams, 3.0))
      REQUIRE(max_abs(to_eigen(hv.value_at(q)) - to_eigen(hf.value_at(q))) <= 1e-15);
  }
  SECTION("square identity at random (p, r, e2)") {
    Rng rng(kDefaultSeed ^ 0x61);
    for (int i = 0; i < 50; ++i) {
      const double r = rng.uniform(0.1, 5.0);
      const double e2 = rng.uniform(0.0, 2.0);
      const PotentialSpec pot = PotentialSpec::inverse_square(e2);
      const auto q = make_point(rng.uniform6(-3, 3), kParams);
      const ComplexMatrix h = to_eigen(hamiltonian_V(kParams, pot, r).value_at(q));
      double s = kParams.m * kParams.m + pot.V(r);
      for (double x : q.p) s += x * x;
      REQUIRE(max_abs(h * h - s * ComplexMatrix::Identity(8, 8)) <= 1e-12);
    }
  }
  SECTION("rest spectrum +-sqrt(m^2 + V)") {
    const PotentialSpec pot = PotentialSpec::inverse_square(0.7);
    const double r = 0.5;
    const auto ev = hermitian_eigenvalues(
        to_eigen(hamiltonian_V(kParams, pot, r).value_at(make_point({0, 0, 0, 0, 0, 0}, kParams))));
    const double e0 = std::sqrt(kParams.m * kParams.m + pot.V(r));
    for (int i = 0; i < 4; ++i) REQUIRE(ev[i] == Catch::Approx(-e0).margin(1e-12));
    for (int i = 4; i < 8; ++i) REQUIRE(ev[i] == Catch::Approx(e0).margin(1e-12));
  }
  SECTION("negative radicand raises a domain error naming r") {
    const PotentialSpec deep = PotentialSpec::general(
        [](double) { return -100.0; });
    REQUIRE_THROWS_WITH(hamiltonian_V(kParams, deep, 2.0),
                        Catch::Matchers::ContainsSubstring("r = 2"));
  }
  SECTION("evaluations below r_min are domain errors, never clamps") {
    const PotentialSpec pot = PotentialSpec::inverse_square(1.0);
    REQUIRE_THROWS_AS(hamiltonian_V(kParams, pot, 1e-4), domain_error);
    REQUIRE_THROWS_AS(hamiltonian_coulomb16(kParams, 1e-4), domain_error);
    REQUIRE_THROWS_AS(hamiltonian_coulomb16(kParams, -1.0), domain_error);
  }
}

TEST_CASE("16x16 linearized Hamiltonian", "[interaction]") {
  Rng rng(kDefaultSeed ^ 0x62);
  const ComplexMatrix id16 = ComplexMatrix::Identity(16, 16);
  SECTION("square identity: the 16x16 form linearizes V = e^4/r^2") {
    for (int i = 0; i < 50; ++i) {
      const double r = rng.uniform(0.1, 5.0);
      TwoBodyParams p = kParams;
      p.e2 = rng.uniform(0.0, 2.0);
      const auto q = make_point(rng.uniform6(-3, 3), p);
      const ComplexMatrix h = to_eigen(hamiltonian_coulomb16(p, r).value_at(q));
      double s = p.m * p.m + (p.e2 * p.e2) / (r * r);
      for (double x : q.p) s += x * x;
      REQUIRE(max_abs(h * h - s * id16) <= 1e-12);
      REQUIRE(hermiticity_residual(h) <= 1e-14);
    }
  }
  SECTION("spectrum is +-sqrt(p^2 + e^4/r^2 + m^2), eightfold each") {
    TwoBodyParams p = kParams;
    p.e2 = 0.9;
    const double r = 0.8;
    const auto q = make_point({0.4, -1.0, 0.2, 1.5, 0.3, -0.7}, p);
    const auto ev = hermitian_eigenvalues(to_eigen(hamiltonian_coulomb16(p, r).value_at(q)));
    double s = p.m * p.m + (p.e2 * p.e2) / (r * r);
    for (double x : q.p) s += x * x;
    const double e0 = std::sqrt(s);
    for (int i = 0; i < 8; ++i) REQUIRE(ev[i] == Catch::Approx(-e0).margin(1e-10));
    for (int i = 8; i < 16; ++i) REQUIRE(ev[i] == Catch::Approx(e0).margin(1e-10));
  }
  SECTION("zero coupling doubles the free spectrum") {
    TwoBodyParams p = kParams;
    p.e2 = 0.0;
    const auto q = make_point({1.0, 0.5, -0.3, 0.0, 2.0, 0.1}, p);
    const auto ev = hermitian_eigenvalues(to_eigen(hamiltonian_coulomb16(p, 1.0).value_at(q)));
    double s = p.m * p.m;
    for (double x : q.p) s += x * x;
    const double e0 = std::sqrt(s);
    for (int i = 0; i < 8; ++i) REQUIRE(ev[i] == Catch::Approx(-e0).margin(1e-12));
    for (int i = 8; i < 16; ++i) REQUIRE(ev[i] == Catch::Approx(e0).margin(1e-12));
  }
}

TEST_CASE("minimal coupling applier", "[interaction]") {
  GridSpec spec;
  spec.active_axes = {1};
  spec.n = {32};
  spec.L = {16.0};
  spec.dt = 0.01;

  SECTION("zero field reduces to the free applier") {
    GridApplier h0 = minimal_coupling(kParams, FieldSpec::none(), spec);
    GridApplier hz = minimal_coupling(kParams, FieldSpec::constant({0, 0, 0, 0, 0, 0}, 1.0), spec);
    GridState st;
    st.spec = spec;
    st.params = kParams;
    st.psi.resize(spec.sites() * kSpinor);
    Rng rng(kDefaultSeed ^ 0x63);
    for (auto& z : st.psi) z = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    std::vector<cplx> a, b;
    h0.apply(st, a);
    hz.apply(st, b);
    for (size_t i = 0; i < a.size(); ++i) REQUIRE(std::abs(a[i] - b[i]) <= 1e-15);
  }

  SECTION("constant A shifts the plane-wave spectrum to k - ec") {
    const double e = 1.0, c = 0.8;
    GridApplier hf = minimal_coupling(kParams, FieldSpec::constant({c, 0, 0, 0, 0, 0}, e), spec);
    for (int mode : {1, 5, 13}) {
      const double k = spec.wavenumber(0, mode);
      GridState st;
      st.spec = spec;
      st.params = kParams;
      st.psi.assign(spec.sites() * kSpinor, cplx(0, 0));
      Eigen::Matrix<cplx, 8, 1> chi;
      chi << 1, cplx(0, 1), -0.5, 0.25, cplx(0.3, -0.1), 0, 0.7, cplx(-0.2, 0.4);
      chi.normalize();
      for (long s = 0; s < spec.sites(); ++s) {
        const cplx ph = std::exp(cplx(0, k * spec.coord(0, static_cast<int>(s))));
        for (int cc = 0; cc < kSpinor; ++cc) st.psi[s * kSpinor + cc] = ph * chi[cc];
      }
      std::vector<cplx> out;
      hf.apply(st, out);
      std::array<double, 6> ks{};
      ks[0] = k - e * c;
      const ComplexMatrix hms = hamiltonian_value(kParams, ks);
      for (long s = 0; s < spec.sites(); ++s) {
        Eigen::Matrix<cplx, 8, 1> v;
        for (int cc = 0; cc < kSpinor; ++cc) v[cc] = st.psi[s * kSpinor + cc];
        const Eigen::Matrix<cplx, 8, 1> expect = hms * v;
        for (int cc = 0; cc < kSpinor; ++cc)
          REQUIRE(std::abs(out[s * kSpinor + cc] - expect[cc]) <= 1e-12);
      }
    }
  }

  SECTION("the applier is linear") {
    GridApplier hf =
        minimal_coupling(kParams, FieldSpec::constant({0.3, 0, 0, 0.9, 0, 0}, 1.2), spec);
    GridState u, v;
    u.spec = v.spec = spec;
    u.params = v.params = kParams;
    u.psi.resize(spec.sites() * kSpinor);
    v.psi.resize(spec.sites() * kSpinor);
    Rng rng(kDefaultSeed ^ 0x64);
    for (auto& z : u.psi) z = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    for (auto& z : v.psi) z = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const cplx alpha(0.6, -1.1);
    GridState mix = u;
    for (size_t i = 0; i < mix.psi.size(); ++i) mix.psi[i] = alpha * u.psi[i] + v.psi[i];
    std::vector<cplx> om, ou, ov;
    hf.apply(mix, om);
    hf.apply(u, ou);
    hf.apply(v, ov);
    for (size_t i = 0; i < om.size(); ++i)
      REQUIRE(std::abs(om[i] - alpha * ou[i] - ov[i]) <= 1e-13);
  }
}
