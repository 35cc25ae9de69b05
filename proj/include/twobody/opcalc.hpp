#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "twobody/linalg.hpp"
#include "twobody/params.hpp"

namespace twobody {

/// A matrix value together with its six momentum partials.
struct JetMatrix {
  ComplexMatrix value;
  std::array<ComplexMatrix, 6> d;
};

/// Symmetric second-derivative storage: index of the unordered pair (A,C).
inline int sym_index(int A, int C) {
  if (A > C) std::swap(A, C);
  static constexpr int off[6] = {0, 6, 11, 15, 18, 20};
  return off[A] + (C - A);
}

namespace detail {
template <class S>
struct add_scalar_tag { using scalar_type = S; };
}  // namespace detail

/// Type-erased matrix-valued function of a momentum point, evaluable at
/// several forward-AD depths.  Coefficient functions are written once as
/// generic callables; the erased interface exposes depths C0..C3 directly
/// and guards two further seeded depths with a runtime error, which bounds
/// how deeply composed operators can be differentiated.
class MatrixFn {
  struct Concept {
    virtual ~Concept() = default;
    virtual int dim() const = 0;
    virtual DMat<C0> eval(const PointT<C0>&) const = 0;
    virtual DMat<C1> eval(const PointT<C1>&) const = 0;
    virtual DMat<C2> eval(const PointT<C2>&) const = 0;
    virtual DMat<C3> eval(const PointT<C3>&) const = 0;
    virtual DMat<C4> eval(const PointT<C4>&) const = 0;
    virtual DMat<Dual<C4>> eval(const PointT<Dual<C4>>&) const = 0;
  };
  template <class F>
  struct Model final : Concept {
    int n;
    F f;
    Model(int n_, F f_) : n(n_), f(std::move(f_)) {}
    int dim() const override { return n; }
    DMat<C0> eval(const PointT<C0>& q) const override { return f(q); }
    DMat<C1> eval(const PointT<C1>& q) const override { return f(q); }
    DMat<C2> eval(const PointT<C2>& q) const override { return f(q); }
    DMat<C3> eval(const PointT<C3>& q) const override { return f(q); }
    DMat<C4> eval(const PointT<C4>&) const override {
      throw std::runtime_error("MatrixFn: differentiation depth exceeded (operator composed too deeply)");
    }
    DMat<Dual<C4>> eval(const PointT<Dual<C4>>&) const override {
      throw std::runtime_error("MatrixFn: differentiation depth exceeded (operator composed too deeply)");
    }
  };

  std::shared_ptr<const Concept> impl_;

 public:
  MatrixFn() = default;
  template <class F>
  MatrixFn(int dim, F f) : impl_(std::make_shared<Model<F>>(dim, std::move(f))) {}

  bool valid() const { return static_cast<bool>(impl_); }
  int dim() const { return impl_->dim(); }

  template <class S>
  DMat<S> operator()(const PointT<S>& q) const {
    return impl_->eval(q);
  }

  DMat<C0> value_at(const MomentumPoint& q) const { return impl_->eval(lift_point(q)); }
  DMat<C1> jet_at(const MomentumPoint& q) const { return impl_->eval(seed_point(lift_point(q))); }

  static MatrixFn zero(int n) {
    return MatrixFn(n, [n](const auto& pt) {
      using S = typename std::decay_t<decltype(pt)>::scalar_type;
      return DMat<S>(n);
    });
  }
  static MatrixFn constant(const ComplexMatrix& m) {
    const int n = static_cast<int>(m.rows());
    return MatrixFn(n, [m, n](const auto& pt) {
      using S = typename std::decay_t<decltype(pt)>::scalar_type;
      return lift_matrix<S>(m);
    });
  }
};

inline MatrixFn operator+(const MatrixFn& f, const MatrixFn& g) {
  return MatrixFn(f.dim(), [f, g](const auto& pt) { return f(pt) + g(pt); });
}
inline MatrixFn operator-(const MatrixFn& f, const MatrixFn& g) {
  return MatrixFn(f.dim(), [f, g](const auto& pt) { return f(pt) - g(pt); });
}
inline MatrixFn operator*(const cplx& c, const MatrixFn& f) {
  return MatrixFn(f.dim(), [f, c](const auto& pt) {
    using S = typename std::decay_t<decltype(pt)>::scalar_type;
    return f(pt) * lift_scalar<S>(c);
  });
}

/// Graded coefficient values of an operator at a point.
struct GradedValues {
  int dim = 0;
  int order = 0;
  ComplexMatrix A;
  std::array<ComplexMatrix, 6> B;
  std::array<ComplexMatrix, 21> C2;  // symmetric storage, full-sym convention

  static GradedValues zeros(int dim, int order) {
    GradedValues g;
    g.dim = dim;
    g.order = order;
    g.A = ComplexMatrix::Zero(dim, dim);
    for (auto& b : g.B) b = ComplexMatrix::Zero(dim, dim);
    for (auto& c : g.C2) c = ComplexMatrix::Zero(dim, dim);
    return g;
  }
  /// Max |entry| of the coefficients of the given derivative order.
  double order_norm(int k) const {
    double w = 0;
    if (k == 0) w = max_abs(A);
    if (k == 1)
      for (const auto& b : B) w = std::max(w, max_abs(b));
    if (k == 2)
      for (const auto& c : C2) w = std::max(w, max_abs(c));
    return w;
  }
  GradedValues& operator-=(const GradedValues& o) {
    A -= o.A;
    for (int i = 0; i < 6; ++i) B[i] -= o.B[i];
    for (int i = 0; i < 21; ++i) C2[i] -= o.C2[i];
    order = std::max(order, o.order);
    return *this;
  }
  GradedValues& axpy(const cplx& c, const GradedValues& o) {
    A += c * o.A;
    for (int i = 0; i < 6; ++i) B[i] += c * o.B[i];
    for (int i = 0; i < 21; ++i) C2[i] += c * o.C2[i];
    order = std::max(order, o.order);
    return *this;
  }
};

/// Graded coefficient jets (values plus six partials each).
struct OpJets {
  int dim = 0;
  int order = 0;
  JetMatrix A;
  std::array<JetMatrix, 6> B;
  std::array<JetMatrix, 21> C2;
};

inline JetMatrix to_jet(const DMat<C1>& j) {
  JetMatrix r;
  r.value = to_eigen(jet_value(j));
  for (int a = 0; a < 6; ++a) r.d[a] = to_eigen(jet_deriv(j, a));
  return r;
}

/// Differential operator in momentum representation,
///   L = A(p) + sum_A B_A(p) d/dp_A + sum_{A,C} C_AC(p) d^2/dp_A dp_C,
/// with matrix-valued coefficients and derivative order at most 2.
/// Position acts as x_A = +i d/dp_A so that [x_A, p_B] = i delta_AB.
class DiffOp {
 public:
  DiffOp() = default;

  static DiffOp multiplication(MatrixFn A) {
    DiffOp L;
    L.dim_ = A.dim();
    L.order_ = 0;
    L.A_ = std::move(A);
    return L;
  }
  static DiffOp order1(MatrixFn A, std::array<MatrixFn, 6> B) {
    DiffOp L;
    L.dim_ = A.dim();
    L.order_ = 1;
    L.A_ = std::move(A);
    L.B_ = std::move(B);
    return L;
  }
  static DiffOp order2(MatrixFn A, std::array<MatrixFn, 6> B, std::array<MatrixFn, 21> C) {
    DiffOp L;
    L.dim_ = A.dim();
    L.order_ = 2;
    L.A_ = std::move(A);
    L.B_ = std::move(B);
    L.C_ = std::move(C);
    return L;
  }

  /// Multiplication by p_A (axis 1..6).
  static DiffOp momentum(int axis, int dim) {
    require_axis(axis);
    const int a0 = axis - 1;
    return multiplication(MatrixFn(dim, [a0, dim](const auto& pt) {
      using S = typename std::decay_t<decltype(pt)>::scalar_type;
      return DMat<S>::scalar(dim, pt.p[a0]);
    }));
  }

  /// x_A = +i d/dp_A (axis 1..6).
  static DiffOp position(int axis, int dim) {
    require_axis(axis);
    std::array<MatrixFn, 6> B;
    for (int c = 0; c < 6; ++c) B[c] = MatrixFn::zero(dim);
    B[axis - 1] = MatrixFn::constant(cplx(0, 1) * ComplexMatrix::Identity(dim, dim));
    return order1(MatrixFn::zero(dim), std::move(B));
  }

  int dim() const { return dim_; }
  int order() const { return order_; }
  const MatrixFn& A() const { return A_; }
  const MatrixFn& B(int c0) const { return B_[c0]; }
  /// Symmetric order-2 coefficient for the (possibly unordered) pair (A,C).
  const MatrixFn& C2sym(int a0, int c0) const { return C_[sym_index(a0, c0)]; }
  const MatrixFn& C2flat(int idx) const { return C_[idx]; }

  GradedValues values_at(const MomentumPoint& q) const {
    GradedValues g = GradedValues::zeros(dim_, order_);
    g.A = to_eigen(A_.value_at(q));
    if (order_ >= 1)
      for (int c = 0; c < 6; ++c) g.B[c] = to_eigen(B_[c].value_at(q));
    if (order_ == 2)
      for (int i = 0; i < 21; ++i) g.C2[i] = to_eigen(C_[i].value_at(q));
    return g;
  }

 private:
  static void require_axis(int axis) {
    if (axis < 1 || axis > 6) throw std::out_of_range("axis must be 1..6");
  }
  int dim_ = 0;
  int order_ = 0;
  MatrixFn A_;
  std::array<MatrixFn, 6> B_;
  std::array<MatrixFn, 21> C_;
};

/// evaluate(L, q): graded coefficient jets, derivatives exact to dual precision.
inline OpJets evaluate(const DiffOp& L, const MomentumPoint& q) {
  OpJets r;
  r.dim = L.dim();
  r.order = L.order();
  r.A = to_jet(L.A().jet_at(q));
  const JetMatrix zero{ComplexMatrix::Zero(L.dim(), L.dim()),
                       {ComplexMatrix::Zero(L.dim(), L.dim()), ComplexMatrix::Zero(L.dim(), L.dim()),
                        ComplexMatrix::Zero(L.dim(), L.dim()), ComplexMatrix::Zero(L.dim(), L.dim()),
                        ComplexMatrix::Zero(L.dim(), L.dim()), ComplexMatrix::Zero(L.dim(), L.dim())}};
  for (auto& b : r.B) b = zero;
  for (auto& c : r.C2) c = zero;
  if (L.order() >= 1)
    for (int c = 0; c < 6; ++c) r.B[c] = to_jet(L.B(c).jet_at(q));
  if (L.order() == 2)
    for (int i = 0; i < 21; ++i) r.C2[i] = to_jet(L.C2flat(i).jet_at(q));
  return r;
}

inline DiffOp operator+(const DiffOp& L1, const DiffOp& L2);
inline DiffOp operator-(const DiffOp& L1, const DiffOp& L2);

namespace detail {
inline std::array<MatrixFn, 6> padded_B(const DiffOp& L) {
  std::array<MatrixFn, 6> B;
  for (int c = 0; c < 6; ++c) B[c] = L.order() >= 1 ? L.B(c) : MatrixFn::zero(L.dim());
  return B;
}
inline std::array<MatrixFn, 21> padded_C(const DiffOp& L) {
  std::array<MatrixFn, 21> C;
  for (int i = 0; i < 21; ++i) C[i] = L.order() == 2 ? L.C2flat(i) : MatrixFn::zero(L.dim());
  return C;
}

template <class Op>
DiffOp lincomb(const DiffOp& L1, const DiffOp& L2, Op combine) {
  if (L1.dim() != L2.dim()) throw std::invalid_argument("DiffOp lincomb: dimension mismatch");
  const int order = std::max(L1.order(), L2.order());
  auto comb = [combine](const MatrixFn& f, const MatrixFn& g) {
    return MatrixFn(f.dim(), [f, g, combine](const auto& pt) { return combine(f(pt), g(pt)); });
  };
  MatrixFn A = comb(L1.A(), L2.A());
  if (order == 0) return DiffOp::multiplication(std::move(A));
  auto B1 = padded_B(L1), B2 = padded_B(L2);
  std::array<MatrixFn, 6> B;
  for (int c = 0; c < 6; ++c) B[c] = comb(B1[c], B2[c]);
  if (order == 1) return DiffOp::order1(std::move(A), std::move(B));
  auto C1 = padded_C(L1), C2 = padded_C(L2);
  std::array<MatrixFn, 21> C;
  for (int i = 0; i < 21; ++i) C[i] = comb(C1[i], C2[i]);
  return DiffOp::order2(std::move(A), std::move(B), std::move(C));
}
}  // namespace detail

inline DiffOp operator+(const DiffOp& L1, const DiffOp& L2) {
  return detail::lincomb(L1, L2, [](const auto& x, const auto& y) { return x + y; });
}
inline DiffOp operator-(const DiffOp& L1, const DiffOp& L2) {
  return detail::lincomb(L1, L2, [](const auto& x, const auto& y) { return x - y; });
}

/// Operator product L1 . L2 with chain-rule derivative terms.
/// Requires order(L1) + order(L2) <= 2.
inline DiffOp compose(const DiffOp& L1, const DiffOp& L2) {
  if (L1.dim() != L2.dim()) throw std::invalid_argument("compose: dimension mismatch");
  const int r1 = L1.order(), r2 = L2.order();
  if (r1 + r2 > 2) throw std::invalid_argument("compose: resulting order would exceed 2");
  const int dim = L1.dim();

  MatrixFn A(dim, [L1, L2, dim](const auto& pt) {
    using S = typename std::decay_t<decltype(pt)>::scalar_type;
    DMat<S> acc(dim);
    const DMat<S> A1 = L1.A()(pt);
    if (L1.order() == 0) {
      acc = A1 * L2.A()(pt);
    } else if (L1.order() == 1) {
      const auto A2j = L2.A()(seed_point(pt));
      acc = A1 * jet_value(A2j);
      for (int a = 0; a < 6; ++a) acc += L1.B(a)(pt)*jet_deriv(A2j, a);
    } else {
      const auto A2jj = L2.A()(seed_point(seed_point(pt)));
      acc = A1 * jet_value(jet_value(A2jj));
      for (int a = 0; a < 6; ++a) acc += L1.B(a)(pt)*jet_value(jet_deriv(A2jj, a));
      for (int a = 0; a < 6; ++a)
        for (int c = 0; c < 6; ++c)
          acc += L1.C2sym(a, c)(pt) * jet_deriv(jet_deriv(A2jj, a), c);
    }
    return acc;
  });

  if (r1 + r2 == 0) return DiffOp::multiplication(std::move(A));

  std::array<MatrixFn, 6> B;
  for (int cc = 0; cc < 6; ++cc) {
    B[cc] = MatrixFn(dim, [L1, L2, cc, dim](const auto& pt) {
      using S = typename std::decay_t<decltype(pt)>::scalar_type;
      DMat<S> acc(dim);
      if (L2.order() >= 1) acc += L1.A()(pt)*L2.B(cc)(pt);
      if (L1.order() >= 1) {
        acc += L1.B(cc)(pt)*L2.A()(pt);
        if (L2.order() >= 1) {
          const auto B2j = L2.B(cc)(seed_point(pt));
          for (int a = 0; a < 6; ++a) acc += L1.B(a)(pt)*jet_deriv(B2j, a);
        }
      }
      if (L1.order() == 2) {
        const auto A2j = L2.A()(seed_point(pt));
        for (int a = 0; a < 6; ++a) acc += 2.0 * (L1.C2sym(a, cc)(pt)*jet_deriv(A2j, a));
      }
      return acc;
    });
  }

  std::array<MatrixFn, 21> C;
  for (int a = 0; a < 6; ++a)
    for (int c = a; c < 6; ++c) {
      C[sym_index(a, c)] = MatrixFn(dim, [L1, L2, a, c, dim](const auto& pt) {
        using S = typename std::decay_t<decltype(pt)>::scalar_type;
        DMat<S> acc(dim);
        if (L1.order() >= 1 && L2.order() >= 1) {
          acc += 0.5 * (L1.B(a)(pt)*L2.B(c)(pt) + L1.B(c)(pt)*L2.B(a)(pt));
        }
        if (L2.order() == 2) acc += L1.A()(pt)*L2.C2sym(a, c)(pt);
        if (L1.order() == 2) acc += L1.C2sym(a, c)(pt)*L2.A()(pt);
        return acc;
      });
    }

  if (r1 + r2 == 1) return DiffOp::order1(std::move(A), std::move(B));
  return DiffOp::order2(std::move(A), std::move(B), std::move(C));
}

/// Commutator [L1, L2] as an operator (orders <= 1 each so the result
/// stays within order 2; the order-2 coefficient is retained so closure
/// checks can assert it vanishes).
inline DiffOp commutator_op(const DiffOp& L1, const DiffOp& L2) {
  if (L1.order() > 1 || L2.order() > 1)
    throw std::invalid_argument("commutator: operand orders must be <= 1");
  return compose(L1, L2) - compose(L2, L1);
}

/// commutator(L1, L2, q): graded coefficient jets of [L1, L2] at q.
inline OpJets commutator(const DiffOp& L1, const DiffOp& L2, const MomentumPoint& q) {
  return evaluate(commutator_op(L1, L2), q);
}

/// Order <= 1 operator coefficients evaluated as jets at one point.  The
/// closure checks cache these per generator per point and assemble all
/// commutators from the cached jets.
struct EvaluatedOp {
  int dim = 0;
  int order = 0;
  DMat<C1> A;
  std::array<DMat<C1>, 6> B;
};

inline EvaluatedOp eval_order1(const DiffOp& L, const MomentumPoint& q) {
  if (L.order() > 1) throw std::invalid_argument("eval_order1: operator order must be <= 1");
  EvaluatedOp e;
  e.dim = L.dim();
  e.order = L.order();
  e.A = L.A().jet_at(q);
  for (int c = 0; c < 6; ++c)
    e.B[c] = L.order() >= 1 ? L.B(c).jet_at(q) : DMat<C1>(L.dim());
  return e;
}

/// Graded values of [L1, L2] assembled from cached coefficient jets.
inline GradedValues commutator_values(const EvaluatedOp& e1, const EvaluatedOp& e2) {
  const int n = e1.dim;
  GradedValues g = GradedValues::zeros(n, 2);
  const DMat<C0> A1 = jet_value(e1.A), A2 = jet_value(e2.A);
  std::array<DMat<C0>, 6> B1, B2, dA1, dA2;
  for (int a = 0; a < 6; ++a) {
    B1[a] = jet_value(e1.B[a]);
    B2[a] = jet_value(e2.B[a]);
    dA1[a] = jet_deriv(e1.A, a);
    dA2[a] = jet_deriv(e2.A, a);
  }
  DMat<C0> o0 = A1 * A2 - A2 * A1;
  for (int a = 0; a < 6; ++a) o0 += B1[a] * dA2[a] - B2[a] * dA1[a];
  g.A = to_eigen(o0);
  for (int c = 0; c < 6; ++c) {
    DMat<C0> o1 = A1 * B2[c] - A2 * B1[c] + B1[c] * A2 - B2[c] * A1;
    for (int a = 0; a < 6; ++a)
      o1 += B1[a] * jet_deriv(e2.B[c], a) - B2[a] * jet_deriv(e1.B[c], a);
    g.B[c] = to_eigen(o1);
  }
  for (int a = 0; a < 6; ++a)
    for (int c = a; c < 6; ++c) {
      const DMat<C0> o2 = 0.5 * (B1[a] * B2[c] + B1[c] * B2[a] - B2[a] * B1[c] - B2[c] * B1[a]);
      g.C2[sym_index(a, c)] = to_eigen(o2);
    }
  return g;
}

/// U L U^dag for a matrix function U of momentum; the derivative-of-U term
/// U B_C (d_C U^dag) lands in the order-0 coefficient.  U is checked for
/// unitarity lazily at evaluation points.
inline DiffOp conjugate(const MatrixFn& U, const DiffOp& L, double unitarity_tol = 1e-10) {
  const int dim = L.dim();
  if (U.dim() != dim) throw std::invalid_argument("conjugate: dimension mismatch");

  MatrixFn A(dim, [U, L, dim, unitarity_tol](const auto& pt) {
    using S = typename std::decay_t<decltype(pt)>::scalar_type;
    const auto Uj = U(seed_point(pt));  // jets of U at the ambient depth
    const DMat<S> Uv = jet_value(Uj);
    {
      const DMat<C0> U0 = value_part(Uv);
      const ComplexMatrix ue = to_eigen(U0);
      const double resid = max_abs(ue * ue.adjoint() - ComplexMatrix::Identity(dim, dim));
      if (resid > unitarity_tol)
        throw domain_error("conjugate: U not unitary at evaluation point (residual " +
                           std::to_string(resid) + ")");
    }
    DMat<S> acc = Uv * L.A()(pt) * Uv.adjoint();
    if (L.order() >= 1)
      for (int c = 0; c < 6; ++c)
        acc += Uv * L.B(c)(pt) * jet_deriv(Uj, c).adjoint();
    if (L.order() == 2) {
      const auto Ujj = U(seed_point(seed_point(pt)));
      for (int a = 0; a < 6; ++a)
        for (int c = 0; c < 6; ++c)
          acc += Uv * L.C2sym(a, c)(pt) * jet_deriv(jet_deriv(Ujj, a), c).adjoint();
    }
    return acc;
  });

  if (L.order() == 0) return DiffOp::multiplication(std::move(A));

  std::array<MatrixFn, 6> B;
  for (int cc = 0; cc < 6; ++cc) {
    B[cc] = MatrixFn(dim, [U, L, cc](const auto& pt) {
      using S = typename std::decay_t<decltype(pt)>::scalar_type;
      const auto Uj = U(seed_point(pt));
      const DMat<S> Uv = jet_value(Uj);
      DMat<S> acc = Uv * L.B(cc)(pt) * Uv.adjoint();
      if (L.order() == 2)
        for (int a = 0; a < 6; ++a)
          acc += 2.0 * (Uv * L.C2sym(a, cc)(pt) * jet_deriv(Uj, a).adjoint());
      return acc;
    });
  }
  if (L.order() == 1) return DiffOp::order1(std::move(A), std::move(B));

  std::array<MatrixFn, 21> C;
  for (int a = 0; a < 6; ++a)
    for (int c = a; c < 6; ++c) {
      C[sym_index(a, c)] = MatrixFn(dim, [U, L, a, c](const auto& pt) {
        const auto Uv = U(pt);
        return Uv * L.C2sym(a, c)(pt) * Uv.adjoint();
      });
    }
  return DiffOp::order2(std::move(A), std::move(B), std::move(C));
}

/// Pointwise comparison record of two operators.
struct ResidualEntry {
  std::string relation;
  int point_index = 0;
  std::array<double, 6> p{};
  double t = 0;
  int order = 0;
  double residual = 0;
  double tol = 0;
  bool pass = true;
};

struct ResidualReport {
  std::string relation;
  double tol = 0;
  std::vector<ResidualEntry> entries;
  double max_residual = 0;
  bool pass = true;
};

/// op_equal_at: per-point, per-order max-norm residuals of L1 - L2.
inline ResidualReport op_equal_at(const DiffOp& L1, const DiffOp& L2,
                                  const std::vector<MomentumPoint>& points, double tol,
                                  const std::string& relation = "op_equal") {
  if (L1.dim() != L2.dim()) throw std::invalid_argument("op_equal_at: dimension mismatch");
  ResidualReport rep;
  rep.relation = relation;
  rep.tol = tol;
  for (size_t i = 0; i < points.size(); ++i) {
    GradedValues g1 = L1.values_at(points[i]);
    const GradedValues g2 = L2.values_at(points[i]);
    g1 -= g2;
    for (int k = 0; k <= std::max(L1.order(), L2.order()); ++k) {
      ResidualEntry e;
      e.relation = relation;
      e.point_index = static_cast<int>(i);
      e.p = points[i].p;
      e.t = points[i].t;
      e.order = k;
      e.residual = g1.order_norm(k);
      e.tol = tol;
      e.pass = e.residual <= tol;
      rep.max_residual = std::max(rep.max_residual, e.residual);
      rep.pass = rep.pass && e.pass;
      rep.entries.push_back(std::move(e));
    }
  }
  return rep;
}

}  // namespace twobody
