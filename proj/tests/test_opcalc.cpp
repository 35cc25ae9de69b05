#include <catch2/catch_amalgamated.hpp>

#include "twobody/observables.hpp"
#include "twobody/poincare.hpp"

using namespace twobody;

namespace {

const TwoBodyParams kParams = TwoBodyParams::equal_mass(2.0);

/// Central finite difference of a matrix function, step h.
ComplexMatrix central_diff(const MatrixFn& f, const MomentumPoint& q, int axis, double h) {
  MomentumPoint qp = q, qm = q;
  qp.p[axis] += h;
  qm.p[axis] -= h;
  return (to_eigen(f.value_at(qp)) - to_eigen(f.value_at(qm))) / (2 * h);
}

}  // namespace

TEST_CASE("evaluate: multiplication operators and exact jets", "[opcalc]") {
  const auto q = make_point({0.3, -0.7, 1.1, 0.4, -0.2, 0.9}, kParams);
  const DiffOp p1 = DiffOp::momentum(1, 8);
  const OpJets j = evaluate(p1, q);
  REQUIRE(j.order == 0);
  REQUIRE(max_abs(j.A.value - 0.3 * ComplexMatrix::Identity(8, 8)) == 0.0);
  REQUIRE(max_abs(j.A.d[0] - ComplexMatrix::Identity(8, 8)) == 0.0);
  for (int a = 1; a < 6; ++a) REQUIRE(max_abs(j.A.d[a]) == 0.0);
}

TEST_CASE("evaluate: E at the Pythagorean point with zero mass", "[opcalc]") {
  // scalar surface: the mass enters as a plain argument here
  MatrixFn Efn(8, [](const auto& pt) {
    using S = typename std::decay_t<decltype(pt)>::scalar_type;
    return DMat<S>::scalar(8, energy_total(pt, 0.0));
  });
  const auto q = make_point({3, 0, 0, 4, 0, 0}, kParams);
  const OpJets j = evaluate(DiffOp::multiplication(Efn), q);
  REQUIRE(max_abs(j.A.value - 5.0 * ComplexMatrix::Identity(8, 8)) <= 1e-15);
  // dE/dp_1 = 3/5 = 0.6, cross-checked by central differences
  REQUIRE(max_abs(j.A.d[0] - 0.6 * ComplexMatrix::Identity(8, 8)) <= 1e-14);
  const ComplexMatrix fd = central_diff(Efn, q, 0, 1e-6);
  REQUIRE(max_abs(j.A.d[0] - fd) <= 1e-8);
}

TEST_CASE("compose: canonical commutation relations", "[opcalc]") {
  const auto q = make_point({0.5, -1.2, 0.7, 2.0, 0.1, -0.4}, kParams);
  const DiffOp x1 = DiffOp::position(1, 8);
  const DiffOp x4 = DiffOp::position(4, 8);
  const DiffOp p1 = DiffOp::momentum(1, 8);

  GradedValues c = (compose(x1, p1) - compose(p1, x1)).values_at(q);
  REQUIRE(max_abs(c.A - cplx(0, 1) * ComplexMatrix::Identity(8, 8)) == 0.0);
  REQUIRE(c.order_norm(1) == 0.0);
  REQUIRE(c.order_norm(2) == 0.0);

  // [x_1, p_1^2] = 2i p_1
  MatrixFn p1sq(8, [](const auto& pt) {
    using S = typename std::decay_t<decltype(pt)>::scalar_type;
    return DMat<S>::scalar(8, pt.p[0] * pt.p[0]);
  });
  c = (compose(x1, DiffOp::multiplication(p1sq)) - compose(DiffOp::multiplication(p1sq), x1))
          .values_at(q);
  REQUIRE(max_abs(c.A - cplx(0, 1.0) * ComplexMatrix::Identity(8, 8)) == 0.0);

  // [x_1, x_4] = 0 at every order
  c = (compose(x1, x4) - compose(x4, x1)).values_at(q);
  REQUIRE(c.order_norm(0) == 0.0);
  REQUIRE(c.order_norm(1) == 0.0);
  REQUIRE(c.order_norm(2) == 0.0);
}

TEST_CASE("compose: order cap is a hard error", "[opcalc]") {
  const DiffOp x1 = DiffOp::position(1, 8);
  const DiffOp two = compose(x1, DiffOp::position(2, 8));
  REQUIRE(two.order() == 2);
  REQUIRE_THROWS_AS(compose(two, x1), std::invalid_argument);
  REQUIRE_THROWS_AS(commutator_op(two, x1), std::invalid_argument);
}

TEST_CASE("second derivatives flow through order-2 composition", "[opcalc]") {
  // (x_1 x_1) . f for f = p_1^3: order-0 term i^2 d^2/dp^2 f = -6 p_1
  MatrixFn cube(4, [](const auto& pt) {
    using S = typename std::decay_t<decltype(pt)>::scalar_type;
    return DMat<S>::scalar(4, pt.p[0] * pt.p[0] * pt.p[0]);
  });
  const DiffOp xx = compose(DiffOp::position(1, 4), DiffOp::position(1, 4));
  const DiffOp composed = compose(xx, DiffOp::multiplication(cube));
  const auto q = make_point({0.8, 0, 0, 0, 0, 0}, kParams);
  const GradedValues g = composed.values_at(q);
  REQUIRE(max_abs(g.A - (-6.0 * 0.8) * ComplexMatrix::Identity(4, 4)) <= 1e-14);
}

TEST_CASE("commutator antisymmetry is exact pointwise", "[opcalc]") {
  const TwoBodyParams params = kParams;
  const GeneratorSet g = generators_canonical(params);
  for (const auto& q : sample_momenta(5, 0x5EED, params, 2.5, 0.3)) {
    const auto e1 = eval_order1(g.K[0], q);
    const auto e2 = eval_order1(g.Jpair[2], q);
    GradedValues a = commutator_values(e1, e2);
    const GradedValues b = commutator_values(e2, e1);
    a.axpy(1.0, b);
    REQUIRE(a.order_norm(0) == 0.0);
    REQUIRE(a.order_norm(1) == 0.0);
    REQUIRE(a.order_norm(2) == 0.0);
  }
}

TEST_CASE("dual-number jets agree with central finite differences", "[opcalc]") {
  Rng rng(0x5EED);
  const MatrixFn H = free_hamiltonian_fn(2.0);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double m = rng.uniform(0.1, 10.0);
    const TwoBodyParams params = TwoBodyParams::equal_mass(m);
    const auto q = make_point(rng.uniform6(-10.0 / std::sqrt(6.0), 10.0 / std::sqrt(6.0)), params);
    const MatrixFn U = foldy_U(params);
    MatrixFn EM(8, [m](const auto& pt) {
      using S = typename std::decay_t<decltype(pt)>::scalar_type;
      return DMat<S>::scalar(8, energy_total(pt, m) * mass_internal(pt, m));
    });
    const std::array<const MatrixFn*, 3> fns{&U, &EM, &H};
    for (const MatrixFn* f : fns) {
      const auto jet = f->jet_at(q);
      const int axis = trial % 6;
      const ComplexMatrix fd = central_diff(*f, q, axis, 1e-6);
      const ComplexMatrix ad = to_eigen(jet_deriv(jet, axis));
      const double scale = std::max(1.0, max_abs(ad));
      REQUIRE(max_abs(ad - fd) / scale <= 1e-7);
      ++checked;
    }
  }
  REQUIRE(checked == 300);
}

TEST_CASE("rotation bracket matches the measured structure constants", "[opcalc]") {
  const TwoBodyParams params = kParams;
  const auto fit = sample_momenta(12, 0x5EED ^ 0xF17, params, 3.0, 0.7);
  const StructureTable table = measure_structure_table(params, fit);
  const GeneratorSet g = generators_canonical(params);
  // [J12, J13] per the table (indices 4, 5 in basis order)
  const auto& row = table.coeff[StructureTable::pair_index(4, 5)];
  for (const auto& q : sample_momenta(20, 0x5EED ^ 7, params, 3.0, 0.2)) {
    GradedValues d = commutator_values(eval_order1(g.Jpair[0], q), eval_order1(g.Jpair[1], q));
    for (int k = 0; k < 10; ++k)
      if (std::abs(row[k]) > 0.5)
        d.axpy(-row[k], detail::values_from_jets(eval_order1(g.by_index(k), q)));
    REQUIRE(std::max({d.order_norm(0), d.order_norm(1), d.order_norm(2)}) <= 1e-9);
  }
}

TEST_CASE("conjugate: identity, derivative term, canonical Hamiltonian", "[opcalc]") {
  const TwoBodyParams params = kParams;
  const MatrixFn U = foldy_U(params);
  const MatrixFn id = MatrixFn::constant(ComplexMatrix::Identity(8, 8));
  const DiffOp x1 = DiffOp::position(1, 8);
  const auto pts = sample_momenta(10, 0x5EED ^ 2, params, 2.0);

  const ResidualReport same = op_equal_at(conjugate(id, x1), x1, pts, 1e-14, "conj_id");
  REQUIRE(same.pass);

  // conjugate(U, x_1) order-0 part equals i U (d_1 U^dag), via an FD oracle
  const DiffOp cx = conjugate(U, x1);
  for (const auto& q : pts) {
    const ComplexMatrix u = to_eigen(U.value_at(q));
    const ComplexMatrix dudag = central_diff(adjoint_fn(U), q, 0, 1e-6);
    const ComplexMatrix expect = cplx(0, 1) * u * dudag;
    REQUIRE(max_abs(to_eigen(cx.A().value_at(q)) - expect) <= 1e-8);
  }

  // conjugate(U, P0) has coefficient Gamma_0 E
  const DiffOp P0 = hamiltonian_free(params);
  const DiffOp cP0 = conjugate(U, P0);
  const ComplexMatrix g0 = detail::CliffordConstants::get().gamma0;
  for (const auto& q : sample_momenta(20, 0x5EED ^ 3, params, 3.0)) {
    PointT<double> qq = q;
    const double E = energy_total(qq, params.m);
    REQUIRE(max_abs(to_eigen(cP0.A().value_at(q)) - E * g0) <= 1e-10);
  }
}

TEST_CASE("conjugate rejects a non-unitary transform", "[opcalc]") {
  const MatrixFn notU = MatrixFn::constant(2.0 * ComplexMatrix::Identity(8, 8));
  const DiffOp p1 = DiffOp::momentum(1, 8);
  const DiffOp bad = conjugate(notU, p1);
  const auto q = make_point({1, 0, 0, 0, 0, 0}, kParams);
  REQUIRE_THROWS_AS(bad.values_at(q), domain_error);
}

TEST_CASE("op_equal_at reports per-point per-order residuals", "[opcalc]") {
  const DiffOp p1 = DiffOp::momentum(1, 8);
  const auto pts = sample_momenta(4, 0x5EED ^ 4, kParams, 2.0);
  REQUIRE(op_equal_at(p1, p1, pts, 0.0, "identical").pass);

  const MatrixFn eps = MatrixFn::constant(1e-6 * ComplexMatrix::Identity(8, 8));
  const DiffOp shifted = p1 + DiffOp::multiplication(eps);
  const ResidualReport r = op_equal_at(p1, shifted, pts, 1e-8, "shifted");
  REQUIRE_FALSE(r.pass);
  REQUIRE(r.max_residual == Catch::Approx(1e-6).epsilon(1e-6));
  REQUIRE(r.entries.size() == pts.size());  // one order-0 entry per point
}

TEST_CASE("evaluate names the singular factor", "[opcalc]") {
  MatrixFn f(4, [](const auto& pt) {
    using S = typename std::decay_t<decltype(pt)>::scalar_type;
    const S M = mass_internal(pt, 0.0);  // vanishes at p_{4..6} = 0
    return DMat<S>::scalar(4, guarded_inverse(M, "M"));
  });
  const auto q0 = make_point({1, 1, 1, 0, 0, 0}, kParams);
  REQUIRE_THROWS_WITH(evaluate(DiffOp::multiplication(f), q0), Catch::Matchers::ContainsSubstring("M"));
}

TEST_CASE("Jacobi identity with closed-form inner brackets", "[opcalc]") {
  const TwoBodyParams params = kParams;
  const StructureTable table =
      measure_structure_table(params, sample_momenta(12, 0x5EED ^ 0xF17, params, 3.0, 0.7));
  const GeneratorSet g = generators_canonical(params);
  const int triples[][3] = {{7, 8, 4}, {0, 7, 1}, {7, 8, 9}};
  for (const auto& tr : triples)
    for (const auto& q : sample_momenta(4, 0x5EED ^ 5, params, 2.0, 0.6))
      REQUIRE(jacobi_residual(g, table, tr[0], tr[1], tr[2], q) <= 1e-8);
}

TEST_CASE("materialized commutator agrees with the jet fast path", "[opcalc]") {
  const TwoBodyParams params = kParams;
  const GeneratorSet g = generators_canonical(params);
  const auto q = make_point({0.4, -0.9, 1.3, 0.2, -0.6, 0.8}, params, 0.5);
  const OpJets slow = commutator(g.K[0], g.P[1], q);
  const GradedValues fast = commutator_values(eval_order1(g.K[0], q), eval_order1(g.P[1], q));
  REQUIRE(max_abs(slow.A.value - fast.A) <= 1e-13);
  for (int c = 0; c < 6; ++c) REQUIRE(max_abs(slow.B[c].value - fast.B[c]) <= 1e-13);
  for (int i = 0; i < 21; ++i) REQUIRE(max_abs(slow.C2[i].value - fast.C2[i]) <= 1e-13);
}
