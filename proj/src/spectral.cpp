#include "varns/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "varns/error.hpp"

namespace varns {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

SpectralWorkspace::SpectralWorkspace(const GridSpec& grid) : grid_(grid) {
  grid_.validate();
  require(grid_.topology == Topology::periodic, "spectral operators need a periodic grid",
          ErrorKind::grid_mismatch);
  const int d = grid_.dimension;
  const int last = d - 1;
  for (int a = 0; a < d; ++a) shape_[a] = grid_.resolution[a];
  shape_[last] = grid_.resolution[last] / 2 + 1;
  modes_ = shape_[0] * shape_[1] * shape_[2];

  for (auto& k : kd_) k.assign(modes_, 0.0);
  kd2_.assign(modes_, 0.0);
  k2_.assign(modes_, 0.0);
  for (std::size_t m = 0; m < modes_; ++m) {
    for (int a = 0; a < d; ++a) {
      const std::size_t n = grid_.resolution[a];
      const long signed_m = mode_index(a, m);
      const double k = 2.0 * std::numbers::pi * static_cast<double>(signed_m) / grid_.extents[a];
      const bool nyquist = n % 2 == 0 && signed_m == static_cast<long>(n / 2);
      k2_[m] += k * k;
      kd_[a][m] = nyquist ? 0.0 : k;
      kd2_[m] += kd_[a][m] * kd_[a][m];
    }
  }

  real_buf_ = fftw_alloc_real(grid_.size());
  complex_buf_ = reinterpret_cast<Complex*>(fftw_alloc_complex(modes_));
  int dims[3];
  for (int a = 0; a < d; ++a) dims[a] = static_cast<int>(grid_.resolution[a]);
  std::lock_guard lock(planner_mutex());
  auto* cbuf = reinterpret_cast<fftw_complex*>(complex_buf_);
  forward_plan_ = fftw_plan_dft_r2c(d, dims, real_buf_, cbuf, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r(d, dims, cbuf, real_buf_, FFTW_ESTIMATE);
  require(forward_plan_ && inverse_plan_, "FFT planning failed", ErrorKind::solver);
}

SpectralWorkspace::~SpectralWorkspace() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  fftw_free(real_buf_);
  fftw_free(complex_buf_);
}

long SpectralWorkspace::mode_index(int axis, std::size_t mode) const noexcept {
  if (axis >= grid_.dimension) return 0;
  const std::size_t idx[3] = {mode / (shape_[1] * shape_[2]), (mode / shape_[2]) % shape_[1],
                              mode % shape_[2]};
  const long n = static_cast<long>(grid_.resolution[axis]);
  const long i = static_cast<long>(idx[axis]);
  return i <= n / 2 ? i : i - n;
}

double SpectralWorkspace::multiplicity(std::size_t mode) const noexcept {
  const int last = grid_.dimension - 1;
  const std::size_t n = grid_.resolution[last];
  const std::size_t l = mode % shape_[2];
  const std::size_t i = last == 2 ? l : mode;
  if (i == 0 || (n % 2 == 0 && i == n / 2)) return 1.0;
  return 2.0;
}

void SpectralWorkspace::forward(std::span<const double> in, std::span<Complex> out) {
  require(in.size() == grid_.size() && out.size() == modes_, "transform size mismatch",
          ErrorKind::grid_mismatch);
  std::copy(in.begin(), in.end(), real_buf_);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  std::copy(complex_buf_, complex_buf_ + modes_, out.begin());
}

void SpectralWorkspace::inverse(std::span<const Complex> in, std::span<double> out) {
  require(in.size() == modes_ && out.size() == grid_.size(), "transform size mismatch",
          ErrorKind::grid_mismatch);
  std::copy(in.begin(), in.end(), complex_buf_);
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  const double scale = 1.0 / static_cast<double>(grid_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = real_buf_[i] * scale;
}

std::vector<Complex> SpectralWorkspace::forward(std::span<const double> in) {
  std::vector<Complex> out(modes_);
  forward(in, out);
  return out;
}

std::vector<double> SpectralWorkspace::inverse(std::span<const Complex> in) {
  std::vector<double> out(grid_.size());
  inverse(in, out);
  return out;
}

SpectralVector SpectralWorkspace::forward(const VectorField& v) {
  require(v.grid() == grid_, "field grid does not match workspace", ErrorKind::grid_mismatch);
  SpectralVector out;
  for (int c = 0; c < 3; ++c) out[c] = forward(v.component(c));
  return out;
}

VectorField SpectralWorkspace::inverse(const SpectralVector& v) {
  std::array<std::vector<double>, 3> comps;
  for (int c = 0; c < 3; ++c) comps[c] = inverse(v[c]);
  return VectorField(grid_, std::move(comps));
}

}  // namespace varns
