#pragma once

#include "twobody/interaction.hpp"

namespace twobody {

struct Snapshot {
  double t = 0;
  double norm = 0;
  double energy = 0;
  double pos_fraction = 0;
  std::array<double, 6> centroid{};
};

/// Dispersion E(p) for either mass mode, generic for gradient evaluation.
template <class S>
S dispersion(const TwoBodyParams& params, const PointT<S>& pt) {
  using std::sqrt;
  using twobody::sqrt;
  if (params.mode == MassMode::EqualMass) return energy_total(pt, params.m);
  const double msum = params.m1 + params.m2;
  const double lam2 = msum * msum / (params.m1 * params.m2);
  S acc = lift_scalar<S>(msum * msum);
  for (int a = 0; a < 3; ++a) acc = acc + pt.p[a] * pt.p[a] + lam2 * (pt.p[3 + a] * pt.p[3 + a]);
  return sqrt(acc);
}

inline double dispersion_value(const TwoBodyParams& params, const std::array<double, 6>& p) {
  PointT<double> q;
  q.p = p;
  q.params = params;
  return dispersion(params, q);
}

/// Group velocity dE/dp_A by dual numbers.
inline std::array<double, 6> group_velocity(const TwoBodyParams& params,
                                            const std::array<double, 6>& p) {
  PointT<C0> q;
  for (int a = 0; a < 6; ++a) q.p[a] = p[a];
  q.params = params;
  const C1 e = dispersion(params, seed_point(q));
  std::array<double, 6> g{};
  for (int a = 0; a < 6; ++a) g[a] = e.d[a].real();
  return g;
}

/// Split-step spectral propagator for i dPsi/dt = H Psi.  The free (or
/// constant-A) stepper is exact per mode: H(k)^2 = E(k)^2 I by the Clifford
/// relations, so exp(-i H dt) = cos(E dt) I - i sin(E dt)/E H(k) in closed
/// form.  Space-dependent fields use Strang splitting with the pointwise
/// field exponential in the same closed form.
class Evolution {
 public:
  enum class Stepper { ExactPerMode, Strang };

  Evolution(GridState state, FieldSpec fields = FieldSpec::none())
      : st_(std::move(state)), fields_(std::move(fields)), fft_(st_.spec) {
    st_.spec.validate();
    stepper_ = fields_.empty() ? Stepper::ExactPerMode : Stepper::Strang;
    // aliasing guard (recorded, not fatal for the exact stepper)
    double emax = 0;
    for (int i = 0; i < st_.spec.rank(); ++i) {
      std::array<double, 6> k{};
      k[st_.spec.active_axes[i] - 1] = M_PI / st_.spec.spacing(i);
      emax = std::max(emax, dispersion_value(st_.params, k));
    }
    dt_emax_ = st_.spec.dt * emax;
  }

  void set_stepper(Stepper s) { stepper_ = s; }
  Stepper stepper() const { return stepper_; }
  /// Constant momentum shift e*A for exact stepping under a constant field.
  void set_constant_shift(const std::array<double, 6>& eA) { shift_ = eA; }

  const GridState& state() const { return st_; }
  double dt_times_max_energy() const { return dt_emax_; }

  void step() {
    if (stepper_ == Stepper::ExactPerMode)
      step_exact(st_.spec.dt);
    else
      step_strang();
    st_.t += st_.spec.dt;
    ++step_count_;
    if (!std::isfinite(std::norm(st_.psi[0])) || !std::isfinite(st_.norm_sq()))
      throw std::runtime_error("Evolution: NaN detected at step " + std::to_string(step_count_));
  }

  Snapshot snapshot() const {
    Snapshot s;
    s.t = st_.t;
    s.norm = st_.norm();
    s.energy = GridApplier(st_.params, fields_, st_.spec).energy(st_);
    s.pos_fraction = positive_fraction();
    const double n2 = st_.norm_sq();
    for (int i = 0; i < st_.spec.rank(); ++i) {
      double acc = 0;
      for (long site = 0; site < st_.spec.sites(); ++site) {
        const auto idx = st_.spec.unravel(site);
        double dens = 0;
        for (int c = 0; c < kSpinor; ++c)
          dens += std::norm(st_.psi[static_cast<size_t>(site) * kSpinor + c]);
        acc += st_.spec.coord(i, idx[i]) * dens;
      }
      s.centroid[st_.spec.active_axes[i] - 1] = acc * st_.spec.cell_volume() / n2;
    }
    return s;
  }

  /// Advance `steps` steps, recording a snapshot every `stride` steps
  /// (including the initial state).
  std::vector<Snapshot> run(int steps, int stride) {
    std::vector<Snapshot> out;
    out.push_back(snapshot());
    for (int i = 1; i <= steps; ++i) {
      step();
      if (i % stride == 0 || i == steps) out.push_back(snapshot());
    }
    return out;
  }

  double positive_fraction() const {
    std::vector<cplx> hat = st_.psi;
    fft_.forward(hat);
    double num = 0, den = 0;
    Eigen::Matrix<cplx, 8, 1> v;
    for (long s = 0; s < st_.spec.sites(); ++s) {
      const ComplexMatrix pp =
          positive_projector_value(hamiltonian_value(st_.params, st_.spec.mode_momentum(s)));
      for (int c = 0; c < kSpinor; ++c) v[c] = hat[static_cast<size_t>(s) * kSpinor + c];
      den += v.squaredNorm();
      num += (pp * v).squaredNorm();
    }
    return den > 0 ? num / den : 0.0;
  }

 private:
  void apply_mode_exponential(std::vector<cplx>& hat, double dt) const {
    Eigen::Matrix<cplx, 8, 1> v;
    for (long s = 0; s < st_.spec.sites(); ++s) {
      auto k = st_.spec.mode_momentum(s);
      for (int a = 0; a < 6; ++a) k[a] -= shift_[a];
      const ComplexMatrix h = hamiltonian_value(st_.params, k);
      const double E = dispersion_value(st_.params, k);
      const cplx c = std::cos(E * dt);
      const cplx msin = cplx(0, -1) * (std::sin(E * dt) / E);
      for (int cc = 0; cc < kSpinor; ++cc) v[cc] = hat[static_cast<size_t>(s) * kSpinor + cc];
      v = (c * v + msin * (h * v)).eval();
      for (int cc = 0; cc < kSpinor; ++cc) hat[static_cast<size_t>(s) * kSpinor + cc] = v[cc];
    }
  }

  void step_exact(double dt) {
    fft_.forward(st_.psi);
    apply_mode_exponential(st_.psi, dt);
    fft_.backward(st_.psi);
  }

  void step_strang() {
    const double dt = st_.spec.dt;
    step_exact(0.5 * dt);
    // pointwise field exponential at the midpoint time
    const double tm = st_.t + 0.5 * dt;
    const auto& kk = detail::CliffordConstants::get();
    Eigen::Matrix<cplx, 8, 1> v;
    for (long s = 0; s < st_.spec.sites(); ++s) {
      const auto x = st_.spec.site_coords(s);
      ComplexMatrix w = ComplexMatrix::Zero(8, 8);
      double c2 = 0;
      for (int A0 = 0; A0 < 6; ++A0) {
        const double cA = -fields_.eA(A0, tm, x);  // H_field = -e Gamma_0 Gamma_A A_A
        if (cA != 0) {
          w += cA * kk.alpha[A0];
          c2 += cA * cA;
        }
      }
      if (c2 == 0) continue;
      const double cn = std::sqrt(c2);  // w^2 = cn^2 I
      const cplx cosf = std::cos(cn * dt);
      const cplx msin = cplx(0, -1) * (std::sin(cn * dt) / cn);
      for (int cc = 0; cc < kSpinor; ++cc) v[cc] = st_.psi[static_cast<size_t>(s) * kSpinor + cc];
      v = (cosf * v + msin * (w * v)).eval();
      for (int cc = 0; cc < kSpinor; ++cc) st_.psi[static_cast<size_t>(s) * kSpinor + cc] = v[cc];
    }
    step_exact(0.5 * dt);
  }

  GridState st_;
  FieldSpec fields_;
  SpectralEngine fft_;
  Stepper stepper_ = Stepper::ExactPerMode;
  std::array<double, 6> shift_{};
  double dt_emax_ = 0;
  long step_count_ = 0;
};

/// Wrap-around guard: the packet (4 sigma margins) must stay inside the box
/// for the whole run, estimated with the predicted group velocity.
inline void check_wraparound(const GridSpec& spec, const TwoBodyParams& params,
                             const std::vector<double>& center_x,
                             const std::vector<double>& center_p,
                             const std::vector<double>& width, double total_time) {
  std::array<double, 6> k0{};
  for (int i = 0; i < spec.rank(); ++i) k0[spec.active_axes[i] - 1] = center_p[i];
  const auto v = group_velocity(params, k0);
  for (int i = 0; i < spec.rank(); ++i) {
    const double x0 = center_x[i];
    const double x1 = x0 + v[spec.active_axes[i] - 1] * total_time;
    const double margin = 4.0 * width[i];
    if (x0 < margin || x0 > spec.L[i] - margin || x1 < margin || x1 > spec.L[i] - margin)
      throw std::invalid_argument(
          "evolve: packet would come within 4 sigma of the box edge during the run");
  }
}

struct DiagnoseReport {
  std::array<double, 6> fitted_velocity{};
  std::array<double, 6> predicted_velocity{};
  double max_velocity_rel_error = 0;  // over active axes
  double norm_drift = 0;
  double energy_drift = 0;
  double pos_fraction_min = 1;
  double max_group_speed = 0;
  bool subluminal = true;
};

/// Centroid-trajectory diagnostics over recorded snapshots: least-squares
/// group velocity per active axis vs. the dual-number gradient of E at the
/// packet's central momentum, plus conservation drifts.
inline DiagnoseReport diagnose(const std::vector<Snapshot>& series, const TwoBodyParams& params,
                               const GridSpec& spec, const std::array<double, 6>& central_momentum) {
  if (series.size() < 2) throw std::invalid_argument("diagnose: need at least 2 snapshots");
  DiagnoseReport rep;
  rep.predicted_velocity = group_velocity(params, central_momentum);

  const int n = static_cast<int>(series.size());
  double st = 0, stt = 0;
  for (const auto& s : series) {
    st += s.t;
    stt += s.t * s.t;
  }
  const double det = n * stt - st * st;
  for (int i = 0; i < spec.rank(); ++i) {
    const int a = spec.active_axes[i] - 1;
    double sx = 0, stx = 0;
    for (const auto& s : series) {
      sx += s.centroid[a];
      stx += s.t * s.centroid[a];
    }
    const double slope = (n * stx - st * sx) / det;
    rep.fitted_velocity[a] = slope;
    rep.max_group_speed = std::max(rep.max_group_speed, std::abs(slope));
    const double pred = rep.predicted_velocity[a];
    if (std::abs(pred) > 1e-12)
      rep.max_velocity_rel_error =
          std::max(rep.max_velocity_rel_error, std::abs(slope - pred) / std::abs(pred));
    else
      rep.max_velocity_rel_error = std::max(rep.max_velocity_rel_error, std::abs(slope));
  }
  rep.subluminal = rep.max_group_speed < 1.0;

  for (const auto& s : series) {
    rep.norm_drift = std::max(rep.norm_drift, std::abs(s.norm - series.front().norm));
    rep.energy_drift = std::max(rep.energy_drift, std::abs(s.energy - series.front().energy));
    rep.pos_fraction_min = std::min(rep.pos_fraction_min, s.pos_fraction);
  }
  return rep;
}

}  // namespace twobody
