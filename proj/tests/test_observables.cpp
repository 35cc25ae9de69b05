#include <catch2/catch_amalgamated.hpp>

#include "twobody/observables.hpp"

using namespace twobody;

namespace {
const TwoBodyParams kParams = TwoBodyParams::equal_mass(2.0);
const ComplexMatrix kId8 = ComplexMatrix::Identity(8, 8);
}  // namespace

TEST_CASE("position operator at zero momentum", "[observables]") {
  const auto q0 = make_point({0, 0, 0, 0, 0, 0}, kParams);
  const auto& kk = detail::CliffordConstants::get();
  for (int A = 1; A <= 6; ++A) {
    const ComplexMatrix off = to_eigen(position_X(A, kParams).A().value_at(q0));
    REQUIRE(max_abs(off - cplx(0, 1) / (2.0 * kParams.m) * kk.gammaA[A - 1]) <= 1e-14);
  }
  REQUIRE_THROWS_AS(position_X(0, kParams), std::out_of_range);
  REQUIRE_THROWS_AS(position_X(7, kParams), std::out_of_range);
}

TEST_CASE("canonical pair relations", "[observables]") {
  std::array<DiffOp, 6> X;
  for (int A = 1; A <= 6; ++A) X[A - 1] = position_X(A, kParams);
  for (const auto& q : sample_momenta(50, kDefaultSeed ^ 0x50, kParams, 3.0)) {
    std::array<EvaluatedOp, 6> ex;
    for (int A = 0; A < 6; ++A) ex[A] = eval_order1(X[A], q);
    for (int A = 0; A < 6; ++A)
      for (int B = 0; B < 6; ++B) {
        const GradedValues c = commutator_values(ex[A], eval_order1(DiffOp::momentum(B + 1, 8), q));
        const ComplexMatrix expect = (A == B ? cplx(0, 1) : cplx(0, 0)) * kId8;
        REQUIRE(max_abs(c.A - expect) <= 1e-10);
        REQUIRE(c.order_norm(1) <= 1e-10);
        REQUIRE(c.order_norm(2) <= 1e-10);
      }
    for (int A = 0; A < 6; ++A)
      for (int B = A + 1; B < 6; ++B) {
        const GradedValues c = commutator_values(ex[A], ex[B]);
        REQUIRE(std::max({c.order_norm(0), c.order_norm(1), c.order_norm(2)}) <= 1e-9);
      }
  }
}

TEST_CASE("printed formulas agree with the U-conjugation route", "[observables]") {
  const auto pts = sample_momenta(20, kDefaultSeed ^ 0x51, kParams, 3.0);
  for (int A = 1; A <= 6; ++A) {
    const ResidualReport r = op_equal_at(position_X(A, kParams), position_X_via_U(A, kParams),
                                         pts, 1e-8, "X" + std::to_string(A));
    INFO(r.relation << " max " << r.max_residual);
    REQUIRE(r.pass);
  }
}

TEST_CASE("positive projector", "[observables]") {
  const DiffOp H = hamiltonian_free(kParams);
  SECTION("rest frame block form") {
    const ComplexMatrix pp = positive_projector(H, make_point({0, 0, 0, 0, 0, 0}, kParams));
    ComplexMatrix expect = ComplexMatrix::Zero(8, 8);
    expect.topLeftCorner(4, 4) = ComplexMatrix::Identity(4, 4);
    REQUIRE(max_abs(pp - expect) <= 1e-15);
  }
  SECTION("idempotent, rank 4, kills the subsidiary condition") {
    for (const auto& q : sample_momenta(30, kDefaultSeed ^ 0x52, kParams, 3.0)) {
      const ComplexMatrix pp = positive_projector(H, q);
      REQUIRE(max_abs(pp * pp - pp) <= 1e-13);
      REQUIRE(std::abs(pp.trace().real() - 4.0) <= 1e-12);
      const ComplexMatrix h = to_eigen(H.A().value_at(q));
      PointT<double> qq = q;
      const double E = energy_total(qq, kParams.m);
      REQUIRE(max_abs((kId8 - h / E) * pp) <= 1e-12);
    }
  }
  SECTION("rejects a non-scalar square") {
    const DiffOp bad = DiffOp::multiplication(
        MatrixFn::constant((ComplexMatrix(8, 8) << kId8.topRows(4) * 2.0, kId8.bottomRows(4))
                               .finished()));
    REQUIRE_THROWS_AS(positive_projector(bad, make_point({1, 0, 0, 0, 0, 0}, kParams)),
                      domain_error);
  }
}

TEST_CASE("velocity operator", "[observables]") {
  SECTION("positive-subspace expectation equals the FD gradient of E") {
    for (const auto& q : sample_momenta(50, kDefaultSeed ^ 0x53, kParams, 3.0)) {
      const VelocitySpectrum s = velocity_spectrum(kParams, q);
      REQUIRE(s.hermiticity_residual <= 1e-10);
      for (int a = 0; a < 3; ++a) {
        // independent finite-difference oracle for dE/dp_{a+3}
        MomentumPoint qp = q, qm = q;
        qp.p[3 + a] += 1e-6;
        qm.p[3 + a] -= 1e-6;
        PointT<double> qqp = qp, qqm = qm;
        const double fd =
            (energy_total(qqp, kParams.m) - energy_total(qqm, kParams.m)) / 2e-6;
        REQUIRE(std::abs(s.positive_expectation[a] - fd) <= 1e-8);
      }
      // eigenvalue lists are sorted ascending
      for (int a = 0; a < 3; ++a)
        for (int k = 1; k < 8; ++k) REQUIRE(s.eig_V[a][k] >= s.eig_V[a][k - 1]);
    }
  }
  SECTION("vanishes at zero momentum") {
    for (int a = 1; a <= 3; ++a)
      REQUIRE(max_abs(velocity(a, kParams, make_point({0, 0, 0, 0, 0, 0}, kParams))) <= 1e-14);
  }
}

TEST_CASE("subluminality bound", "[observables]") {
  auto pts = sample_momenta(50, kDefaultSeed ^ 0x54, kParams, 3.0);
  // push some points to extra-axis momenta of order 100 m and 400 m
  pts[10].p = {0.3, -0.2, 0.1, 100 * kParams.m, 50 * kParams.m, -30 * kParams.m};
  pts[20].p = {0.0, 0.0, 0.0, 400.0, 200.0, -120.0};
  const SubluminalReport rep = subluminal_check(kParams, pts);
  REQUIRE(rep.pass);
  REQUIRE(rep.min_margin > 0.0);
  for (const auto& e : rep.entries) REQUIRE(e.max_eig_v2 < 1.0);
  // the bound tightens with momentum but never crosses 1
  const VelocitySpectrum far = velocity_spectrum(
      kParams, make_point({0, 0, 0, 400, 200, -120}, kParams));
  REQUIRE(far.eig_V2.maxCoeff() > 0.999);
  REQUIRE(far.eig_V2.maxCoeff() < 1.0);
}
