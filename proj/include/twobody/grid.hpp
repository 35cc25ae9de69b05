#pragma once

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "twobody/generators.hpp"
#include "twobody/observables.hpp"

namespace twobody {

constexpr int kSpinor = 8;
constexpr long kMaxSites = 1L << 22;  // desk-scale cap

/// Rectangular grid over a subset of the six coordinates.  Inactive axes
/// carry zero momentum and are handled analytically.
struct GridSpec {
  std::vector<int> active_axes;  // 1-based axes, 1..3 of them
  std::vector<int> n;            // points per active axis (powers of two)
  std::vector<double> L;         // box lengths
  double dt = 0.01;
  int steps = 0;

  int rank() const { return static_cast<int>(active_axes.size()); }
  long sites() const {
    long s = 1;
    for (int ni : n) s *= ni;
    return s;
  }
  double cell_volume() const {
    double v = 1;
    for (int i = 0; i < rank(); ++i) v *= L[i] / n[i];
    return v;
  }
  double spacing(int i) const { return L[i] / n[i]; }
  double coord(int i, int idx) const { return idx * spacing(i); }
  double wavenumber(int i, int idx) const {
    const int ni = n[i];
    const int j = idx < ni / 2 ? idx : idx - ni;
    return 2.0 * M_PI * j / L[i];
  }

  void validate() const {
    if (rank() < 1 || rank() > 3)
      throw std::invalid_argument("GridSpec: 1..3 active axes required");
    if (n.size() != active_axes.size() || L.size() != active_axes.size())
      throw std::invalid_argument("GridSpec: n and L must match active_axes");
    for (int a : active_axes)
      if (a < 1 || a > 6) throw std::invalid_argument("GridSpec: axes must be in 1..6");
    for (int ni : n)
      if (ni < 2 || (ni & (ni - 1)) != 0)
        throw std::invalid_argument("GridSpec: points per axis must be a power of two");
    for (double li : L)
      if (!(li > 0)) throw std::invalid_argument("GridSpec: box lengths must be positive");
    if (!(dt > 0)) throw std::invalid_argument("GridSpec: dt must be positive");
    if (sites() > kMaxSites) throw std::invalid_argument("GridSpec: grid exceeds 2^22 sites");
  }

  /// Row-major site index -> per-axis indices.
  std::array<int, 3> unravel(long site) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int i = rank() - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(site % n[i]);
      site /= n[i];
    }
    return idx;
  }

  /// Six-momentum of a mode (inactive axes at zero).
  std::array<double, 6> mode_momentum(long site) const {
    const auto idx = unravel(site);
    std::array<double, 6> k{};
    for (int i = 0; i < rank(); ++i) k[active_axes[i] - 1] = wavenumber(i, idx[i]);
    return k;
  }

  /// Six-coordinate of a site (inactive axes at zero).
  std::array<double, 6> site_coords(long site) const {
    const auto idx = unravel(site);
    std::array<double, 6> x{};
    for (int i = 0; i < rank(); ++i) x[active_axes[i] - 1] = coord(i, idx[i]);
    return x;
  }
};

/// Multi-component wavefunction sampled on the grid, site-major with the
/// eight spinor components contiguous per site.
struct GridState {
  GridSpec spec;
  TwoBodyParams params;
  double t = 0;
  std::vector<cplx> psi;  // sites * 8
  double norm0 = 1.0;     // norm recorded at t = 0 for drift checks

  double norm_sq() const {
    double s = 0;
    for (const auto& z : psi) s += std::norm(z);
    return s * spec.cell_volume();
  }
  double norm() const { return std::sqrt(norm_sq()); }
};

/// In-place interleaved-spinor FFT over the active axes (FFTW, ESTIMATE
/// plans so results are reproducible run to run).
class SpectralEngine {
 public:
  explicit SpectralEngine(const GridSpec& spec) : sites_(spec.sites()) {
    std::vector<int> n(spec.n.begin(), spec.n.end());
    scratch_.resize(static_cast<size_t>(sites_) * kSpinor);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch_.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_many_dft(spec.rank(), n.data(), kSpinor, buf, nullptr, kSpinor, 1, buf,
                              nullptr, kSpinor, 1, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_many_dft(spec.rank(), n.data(), kSpinor, buf, nullptr, kSpinor, 1, buf,
                              nullptr, kSpinor, 1, FFTW_BACKWARD, flags);
    if (!fwd_ || !bwd_) throw std::runtime_error("SpectralEngine: FFTW planning failed");
  }
  ~SpectralEngine() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  SpectralEngine(const SpectralEngine&) = delete;
  SpectralEngine& operator=(const SpectralEngine&) = delete;

  void forward(std::vector<cplx>& psi) const {
    auto* p = reinterpret_cast<fftw_complex*>(psi.data());
    fftw_execute_dft(fwd_, p, p);
  }
  void backward(std::vector<cplx>& psi) const {
    auto* p = reinterpret_cast<fftw_complex*>(psi.data());
    fftw_execute_dft(bwd_, p, p);
    const double scale = 1.0 / static_cast<double>(sites_);
    for (auto& z : psi) z *= scale;
  }

 private:
  long sites_;
  mutable std::vector<cplx> scratch_;
  fftw_plan fwd_, bwd_;
};

enum class ComponentMode { PositiveEnergy, RawSpinor };

/// Normalized Gaussian packet; in positive-energy mode every Fourier mode
/// is projected onto the +E subspace of H(k).
inline GridState init_gaussian(const GridSpec& spec, const TwoBodyParams& params,
                               const std::vector<double>& center_x,
                               const std::vector<double>& center_p,
                               const std::vector<double>& width, ComponentMode mode,
                               int raw_component = 0) {
  spec.validate();
  params.validate();
  const int r = spec.rank();
  if (static_cast<int>(center_x.size()) != r || static_cast<int>(center_p.size()) != r ||
      static_cast<int>(width.size()) != r)
    throw std::invalid_argument("init_gaussian: center/width sizes must match the rank");
  for (int i = 0; i < r; ++i) {
    if (width[i] < 2.0 * spec.spacing(i))
      throw std::invalid_argument("init_gaussian: under-resolved packet (width < 2 grid spacings)");
    if (center_x[i] < 0 || center_x[i] >= spec.L[i])
      throw std::invalid_argument("init_gaussian: center outside the box");
  }
  GridState st;
  st.spec = spec;
  st.params = params;
  st.t = 0;
  st.psi.assign(static_cast<size_t>(spec.sites()) * kSpinor, cplx(0, 0));

  for (long s = 0; s < spec.sites(); ++s) {
    const auto idx = spec.unravel(s);
    cplx amp(1, 0);
    for (int i = 0; i < r; ++i) {
      const double x = spec.coord(i, idx[i]) - center_x[i];
      amp *= std::exp(cplx(-x * x / (4.0 * width[i] * width[i]), center_p[i] * spec.coord(i, idx[i])));
    }
    st.psi[static_cast<size_t>(s) * kSpinor + raw_component] = amp;
  }

  if (mode == ComponentMode::PositiveEnergy) {
    SpectralEngine fft(spec);
    fft.forward(st.psi);
    Eigen::Matrix<cplx, 8, 1> v;
    for (long s = 0; s < spec.sites(); ++s) {
      const ComplexMatrix pp = positive_projector_value(hamiltonian_value(params, spec.mode_momentum(s)));
      for (int c = 0; c < kSpinor; ++c) v[c] = st.psi[static_cast<size_t>(s) * kSpinor + c];
      v = (pp * v).eval();
      for (int c = 0; c < kSpinor; ++c) st.psi[static_cast<size_t>(s) * kSpinor + c] = v[c];
    }
    fft.backward(st.psi);
  }

  const double nrm = st.norm();
  if (!(nrm > 0)) throw std::invalid_argument("init_gaussian: projected packet has zero norm");
  for (auto& z : st.psi) z /= nrm;
  st.norm0 = st.norm();
  return st;
}

}  // namespace twobody
