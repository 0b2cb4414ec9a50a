#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "varns/grid.hpp"

namespace varns {

using Complex = std::complex<double>;

/// Half-spectrum coefficients of the three components of a real vector field.
using SpectralVector = std::array<std::vector<Complex>, 3>;

/// Real-to-complex transforms and per-mode wavenumbers on a periodic grid.
///
/// Modes follow the r2c half-spectrum layout: full axes except the last
/// active one, which stores indices 0..n/2. Wavenumbers are 2 pi m / L with m
/// the signed index. Two wavenumber sets are kept: the true one (for the heat
/// symbol) and the derivative one with the Nyquist component set to zero (for
/// odd symbols, so that real fields stay real).
///
/// Not safe for concurrent use; give each worker its own workspace.
class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(const GridSpec& grid);
  ~SpectralWorkspace();
  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t mode_count() const noexcept { return modes_; }

  /// Unnormalised forward transform of grid().size() real samples.
  void forward(std::span<const double> in, std::span<Complex> out);
  /// Inverse transform including the 1/N factor, so inverse(forward(f)) = f.
  void inverse(std::span<const Complex> in, std::span<double> out);

  std::vector<Complex> forward(std::span<const double> in);
  std::vector<double> inverse(std::span<const Complex> in);
  SpectralVector forward(const VectorField& v);
  VectorField inverse(const SpectralVector& v);

  /// Derivative wavenumber (Nyquist zeroed) of a mode.
  double derivative_wavenumber(int axis, std::size_t mode) const noexcept {
    return kd_[axis][mode];
  }
  /// Squared length of the derivative wavenumber.
  double derivative_wavenumber_sq(std::size_t mode) const noexcept { return kd2_[mode]; }
  /// True |k|^2 including Nyquist components.
  double wavenumber_sq(std::size_t mode) const noexcept { return k2_[mode]; }

  /// 2 for half-spectrum modes that stand for a conjugate pair, else 1.
  double multiplicity(std::size_t mode) const noexcept;

  /// Signed integer index of a mode along an axis.
  long mode_index(int axis, std::size_t mode) const noexcept;

 private:
  GridSpec grid_;
  std::array<std::size_t, 3> shape_{1, 1, 1};
  std::size_t modes_ = 0;
  std::array<std::vector<double>, 3> kd_;
  std::vector<double> kd2_;
  std::vector<double> k2_;
  double* real_buf_ = nullptr;
  Complex* complex_buf_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace varns
