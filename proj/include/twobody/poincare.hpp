#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "twobody/generators.hpp"

namespace twobody {

/// Measured structure constants: [G_i, G_j] = sum_k c_k G_k over the basis
/// P0,P1,P2,P3,J12,J13,J23,K1,K2,K3.  The table is fitted on the spinless
/// scalar model by least squares, rounded to Gaussian integers, and then
/// required of the matrix generator sets.  Nothing is assumed about sign
/// conventions.
struct StructureTable {
  static int pair_index(int i, int j) {  // i < j over 0..9
    return i * (19 - i) / 2 + (j - i - 1);
  }
  std::array<std::array<cplx, 10>, 45> coeff{};
  double fit_rounding_error = 0;  // max |lstsq coefficient - rounded|

  std::string describe(int i, int j) const {
    std::string s = std::string("[") + kGeneratorNames[i] + "," + kGeneratorNames[j] + "] =";
    bool any = false;
    for (int k = 0; k < 10; ++k) {
      const cplx c = coeff[pair_index(i, j)][k];
      if (std::abs(c) > 0.5) {
        any = true;
        s += " + (" + std::to_string(static_cast<int>(std::lround(c.real()))) + "," +
             std::to_string(static_cast<int>(std::lround(c.imag()))) + "i)*" + kGeneratorNames[k];
      }
    }
    if (!any) s += " 0";
    return s;
  }
};

namespace detail {

/// Flatten order-<=1 graded values (A, B[0..5]) into a complex column.
inline void flatten_into(const GradedValues& g, Eigen::VectorXcd& col, int offset) {
  const int n = g.dim;
  int k = offset;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) col[k++] = g.A(i, j);
  for (int c = 0; c < 6; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) col[k++] = g.B[c](i, j);
}

inline GradedValues values_from_jets(const EvaluatedOp& e) {
  GradedValues g = GradedValues::zeros(e.dim, e.order);
  g.A = to_eigen(jet_value(e.A));
  for (int c = 0; c < 6; ++c) g.B[c] = to_eigen(jet_value(e.B[c]));
  return g;
}

}  // namespace detail

/// Fit the 45-pair table on the scalar model at the given points.
inline StructureTable measure_structure_table(const TwoBodyParams& params,
                                              const std::vector<MomentumPoint>& fit_points) {
  const GeneratorSet sc = generators_scalar_model(params);
  const int npts = static_cast<int>(fit_points.size());
  const int block = 7;  // A + 6 B entries, all 1x1

  std::vector<std::array<EvaluatedOp, 10>> jets(npts);
  Eigen::MatrixXcd basis(block * npts, 10);
  for (int p = 0; p < npts; ++p) {
    for (int k = 0; k < 10; ++k) {
      jets[p][k] = eval_order1(sc.by_index(k), fit_points[p]);
      Eigen::VectorXcd col(block);
      detail::flatten_into(detail::values_from_jets(jets[p][k]), col, 0);
      basis.block(p * block, k, block, 1) = col;
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(basis, Eigen::ComputeThinU | Eigen::ComputeThinV);

  StructureTable table;
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) {
      Eigen::VectorXcd rhs(block * npts);
      for (int p = 0; p < npts; ++p) {
        Eigen::VectorXcd col(block);
        detail::flatten_into(commutator_values(jets[p][i], jets[p][j]), col, 0);
        rhs.segment(p * block, block) = col;
      }
      const Eigen::VectorXcd c = svd.solve(rhs);
      auto& row = table.coeff[StructureTable::pair_index(i, j)];
      for (int k = 0; k < 10; ++k) {
        const cplx rounded(std::round(c[k].real()), std::round(c[k].imag()));
        table.fit_rounding_error = std::max(table.fit_rounding_error, std::abs(c[k] - rounded));
        row[k] = rounded;
      }
    }
  return table;
}

/// Residuals of one generator set against the measured table.
struct ClosurePair {
  std::string pair;
  double residual_low = 0;   // orders 0 and 1
  double residual_ord2 = 0;  // order-2 coefficient (must vanish)
  bool pass = true;
};
struct ClosureResult {
  std::vector<ClosurePair> pairs;
  double worst_low = 0;
  double worst_ord2 = 0;
  bool pass = true;
};

inline ClosureResult closure_check(const GeneratorSet& set, const StructureTable& table,
                                   const std::vector<MomentumPoint>& points, double tol_low = 1e-9,
                                   double tol_ord2 = 1e-10) {
  ClosureResult res;
  res.pairs.resize(45);
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j)
      res.pairs[StructureTable::pair_index(i, j)].pair =
          std::string(kGeneratorNames[i]) + "," + kGeneratorNames[j];

  for (const auto& q : points) {
    std::array<EvaluatedOp, 10> jets;
    std::array<GradedValues, 10> vals;
    for (int k = 0; k < 10; ++k) {
      jets[k] = eval_order1(set.by_index(k), q);
      vals[k] = detail::values_from_jets(jets[k]);
    }
    for (int i = 0; i < 10; ++i)
      for (int j = i + 1; j < 10; ++j) {
        const int pi = StructureTable::pair_index(i, j);
        GradedValues d = commutator_values(jets[i], jets[j]);
        for (int k = 0; k < 10; ++k) {
          const cplx c = table.coeff[pi][k];
          if (std::abs(c) > 0.5) d.axpy(-c, vals[k]);
        }
        auto& pr = res.pairs[pi];
        pr.residual_low = std::max({pr.residual_low, d.order_norm(0), d.order_norm(1)});
        pr.residual_ord2 = std::max(pr.residual_ord2, d.order_norm(2));
      }
  }
  for (auto& pr : res.pairs) {
    pr.pass = pr.residual_low <= tol_low && pr.residual_ord2 <= tol_ord2;
    res.worst_low = std::max(res.worst_low, pr.residual_low);
    res.worst_ord2 = std::max(res.worst_ord2, pr.residual_ord2);
    res.pass = res.pass && pr.pass;
  }
  return res;
}

/// Jacobi identity with the inner bracket replaced by its closed form from
/// the measured table: [G_i,[G_j,G_k]] + [G_j,[G_k,G_i]] + [G_k,[G_i,G_j]].
inline double jacobi_residual(const GeneratorSet& set, const StructureTable& table, int i, int j,
                              int k, const MomentumPoint& q) {
  std::array<EvaluatedOp, 10> jets;
  for (int g = 0; g < 10; ++g) jets[g] = eval_order1(set.by_index(g), q);

  auto bracket_with_closed_inner = [&](int outer, int a, int b) {
    // sign-aware closed form of [G_a, G_b] for any order of a,b
    GradedValues acc = GradedValues::zeros(set.dim, 2);
    const double sgn = a < b ? 1.0 : -1.0;
    const int lo = std::min(a, b), hi = std::max(a, b);
    const auto& row = table.coeff[StructureTable::pair_index(lo, hi)];
    for (int m = 0; m < 10; ++m)
      if (std::abs(row[m]) > 0.5)
        acc.axpy(sgn * row[m], commutator_values(jets[outer], jets[m]));
    return acc;
  };

  GradedValues total = bracket_with_closed_inner(i, j, k);
  GradedValues t2 = bracket_with_closed_inner(j, k, i);
  GradedValues t3 = bracket_with_closed_inner(k, i, j);
  total.axpy(1.0, t2);
  total.axpy(1.0, t3);
  return std::max({total.order_norm(0), total.order_norm(1), total.order_norm(2)});
}

/// Formal self-adjointness of an order-<=1 operator at a point:
/// B_C anti-Hermitian and A - A^dag = sum_C d_C B_C.
inline double formal_selfadjointness_residual(const DiffOp& L, const MomentumPoint& q) {
  const EvaluatedOp e = eval_order1(L, q);
  const ComplexMatrix a = to_eigen(jet_value(e.A));
  double worst = 0;
  ComplexMatrix divB = ComplexMatrix::Zero(L.dim(), L.dim());
  if (L.order() >= 1)
    for (int c = 0; c < 6; ++c) {
      const ComplexMatrix bc = to_eigen(jet_value(e.B[c]));
      worst = std::max(worst, max_abs(bc + bc.adjoint()));
      divB += to_eigen(jet_deriv(e.B[c], c));
    }
  return std::max(worst, max_abs(a - a.adjoint() - divB));
}

}  // namespace twobody
