#pragma once

#include <functional>

#include "twobody/grid.hpp"

namespace twobody {

/// Interaction potential V(r), r = sqrt(x_4^2+x_5^2+x_6^2), declared on
/// r >= r_min.  The inverse-square case V = e^4/r^2 is the one the 16x16
/// linearization covers.
struct PotentialSpec {
  enum class Kind { General, InverseSquare };
  Kind kind = Kind::General;
  std::function<double(double)> Vfn;  // general case
  double e2 = 0;                      // coupling e^2 for the inverse-square case
  double r_min = 1e-3;

  double V(double r) const {
    if (!(r >= r_min))
      throw domain_error("PotentialSpec: r below r_min (" + std::to_string(r_min) + ")");
    return kind == Kind::InverseSquare ? (e2 * e2) / (r * r) : Vfn(r);
  }

  static PotentialSpec inverse_square(double coupling) {
    PotentialSpec p;
    p.kind = Kind::InverseSquare;
    p.e2 = coupling;
    return p;
  }
  static PotentialSpec general(std::function<double(double)> f) {
    PotentialSpec p;
    p.kind = Kind::General;
    p.Vfn = std::move(f);
    return p;
  }
  static PotentialSpec zero() {
    return general([](double) { return 0.0; });
  }
};

/// Frozen-radius interaction Hamiltonian
///   H(p; r) = Gamma_0 Gamma_A p_A + Gamma_0 sqrt(m^2 + V(r)).
/// Only the matrix content at fixed r is produced here; operator-ordering
/// terms from [p_{a+3}, V(r)] are deliberately out of scope.
inline MatrixFn hamiltonian_V(const TwoBodyParams& params, const PotentialSpec& pot, double r) {
  params.validate();
  const double rad = params.total_mass() * params.total_mass() + pot.V(r);
  if (rad < 0)
    throw domain_error("hamiltonian_V: m^2 + V(r) negative at r = " + std::to_string(r));
  const double w = std::sqrt(rad);
  return MatrixFn(8, [w](const auto& pt) {
    using S = typename std::decay_t<decltype(pt)>::scalar_type;
    const auto& kk = detail::CliffordConstants::get();
    DMat<S> acc = lift_matrix<S>(w * kk.gamma0);
    for (int A = 0; A < 6; ++A) acc += lift_matrix<S>(kk.alpha[A]) * pt.p[A];
    return acc;
  });
}

namespace detail {
struct Clifford16Constants {
  ComplexMatrix gamma0;
  std::array<ComplexMatrix, 6> alpha;  // Gamma_0^16 Gamma_A^16
  ComplexMatrix alpha7;                // Gamma_0^16 Gamma_7^16
  static const Clifford16Constants& get() {
    static const Clifford16Constants c = [] {
      Clifford16Constants k;
      const GammaSet g = gamma16();
      k.gamma0 = g.gamma(0);
      for (int A = 0; A < 6; ++A) k.alpha[A] = k.gamma0 * g.gamma(1 + A);
      k.alpha7 = k.gamma0 * g.gamma(7);
      return k;
    }();
    return c;
  }
};
}  // namespace detail

/// 16x16 linearized Coulomb-like Hamiltonian at frozen r:
///   H = Gamma_0^16 Gamma_A^16 p_A + (e^2/r) Gamma_0^16 Gamma_7^16 + m Gamma_0^16.
/// The mass term uses Gamma_0^16 (required for H^2 = (p^2 + e^4/r^2 + m^2) I;
/// the source prints it without the superscript).
inline MatrixFn hamiltonian_coulomb16(const TwoBodyParams& params, double r,
                                      double r_min = 1e-3) {
  params.validate();
  if (!(r > 0)) throw domain_error("hamiltonian_coulomb16: r must be positive");
  if (r < r_min)
    throw domain_error("hamiltonian_coulomb16: r below r_min (" + std::to_string(r_min) + ")");
  const double coupling = params.e2 / r;
  const double m = params.total_mass();
  return MatrixFn(16, [coupling, m](const auto& pt) {
    using S = typename std::decay_t<decltype(pt)>::scalar_type;
    const auto& kk = detail::Clifford16Constants::get();
    DMat<S> acc = lift_matrix<S>(m * kk.gamma0 + coupling * kk.alpha7);
    for (int A = 0; A < 6; ++A) acc += lift_matrix<S>(kk.alpha[A]) * pt.p[A];
    return acc;
  });
}

/// External electromagnetic field: A_a depends on (t, x_1..3) and A_{a+3}
/// on (t, x_4..6); minimal coupling is p_A -> p_A - e A_A.
struct FieldSpec {
  double e = 0;  // charge
  // component functions; empty = zero component
  std::array<std::function<double(double, const std::array<double, 3>&)>, 6> A;

  bool empty() const {
    if (e == 0) return true;
    for (const auto& f : A)
      if (f) return false;
    return true;
  }
  /// e * A_A at (t, x), honoring each component's coordinate sector.
  double eA(int A0, double t, const std::array<double, 6>& x) const {
    if (!A[A0]) return 0.0;
    const std::array<double, 3> sub =
        A0 < 3 ? std::array<double, 3>{x[0], x[1], x[2]} : std::array<double, 3>{x[3], x[4], x[5]};
    return e * A[A0](t, sub);
  }

  static FieldSpec none() { return FieldSpec{}; }
  static FieldSpec constant(const std::array<double, 6>& values, double charge) {
    FieldSpec f;
    f.e = charge;
    for (int a = 0; a < 6; ++a) {
      const double v = values[a];
      if (v != 0) f.A[a] = [v](double, const std::array<double, 3>&) { return v; };
    }
    return f;
  }
};

/// Grid Hamiltonian applier psi -> H psi: derivative terms act spectrally,
/// field terms pointwise (no ordering ambiguity since A multiplies).
class GridApplier {
 public:
  GridApplier(const TwoBodyParams& params, const FieldSpec& fields, const GridSpec& spec)
      : params_(params), fields_(fields), spec_(spec), fft_(spec) {
    spec_.validate();
    params_.validate();
  }

  /// out = H(t) in.  Linear; in is untouched.
  void apply(const GridState& in, std::vector<cplx>& out) const {
    if (in.spec.sites() != spec_.sites())
      throw std::invalid_argument("GridApplier: state/grid mismatch");
    const long sites = spec_.sites();
    out = in.psi;
    fft_.forward(out);
    Eigen::Matrix<cplx, 8, 1> v;
    for (long s = 0; s < sites; ++s) {
      const ComplexMatrix h = hamiltonian_value(params_, spec_.mode_momentum(s));
      for (int c = 0; c < kSpinor; ++c) v[c] = out[static_cast<size_t>(s) * kSpinor + c];
      v = (h * v).eval();
      for (int c = 0; c < kSpinor; ++c) out[static_cast<size_t>(s) * kSpinor + c] = v[c];
    }
    fft_.backward(out);
    if (!fields_.empty()) {
      const auto& kk = detail::CliffordConstants::get();
      Eigen::Matrix<cplx, 8, 1> w;
      for (long s = 0; s < sites; ++s) {
        const auto x = spec_.site_coords(s);
        ComplexMatrix hint = ComplexMatrix::Zero(8, 8);
        bool any = false;
        for (int A0 = 0; A0 < 6; ++A0) {
          const double c = fields_.eA(A0, in.t, x);
          if (c != 0) {
            hint -= c * kk.alpha[A0];
            any = true;
          }
        }
        if (!any) continue;
        for (int c = 0; c < kSpinor; ++c) w[c] = in.psi[static_cast<size_t>(s) * kSpinor + c];
        w = (hint * w).eval();
        for (int c = 0; c < kSpinor; ++c) out[static_cast<size_t>(s) * kSpinor + c] += w[c];
      }
    }
  }

  /// <psi| H |psi> with the grid measure.
  double energy(const GridState& st) const {
    std::vector<cplx> hpsi;
    apply(st, hpsi);
    cplx acc(0, 0);
    for (size_t i = 0; i < hpsi.size(); ++i) acc += std::conj(st.psi[i]) * hpsi[i];
    return (acc * spec_.cell_volume()).real();
  }

 private:
  TwoBodyParams params_;
  FieldSpec fields_;
  GridSpec spec_;
  SpectralEngine fft_;
};

inline GridApplier minimal_coupling(const TwoBodyParams& params, const FieldSpec& fields,
                                    const GridSpec& spec) {
  return GridApplier(params, fields, spec);
}

}  // namespace twobody
