#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "varns/grid.hpp"
#include "varns/spacetime.hpp"
#include "varns/spectral.hpp"

namespace varns {

// ---- Fourier multipliers on periodic grids --------------------------------

/// Riesz transform along `axis` (0-based): symbol -i k_j / |k|, zero mode -> 0.
ScalarField riesz_transform(int axis, const ScalarField& f, SpectralWorkspace& ws);

/// Projection onto divergence-free fields: v - k (k . v) / |k|^2 per mode.
VectorField leray_project(const VectorField& v, SpectralWorkspace& ws);
void leray_project_modes(SpectralVector& v, const SpectralWorkspace& ws);

/// Spectral gradient of a scalar.
VectorField gradient(const ScalarField& f, SpectralWorkspace& ws);

/// sqrt(sum |k . v|^2) / sqrt(sum |k|^2 |v|^2) over all modes; 0 for a
/// constant field.
double divergence_ratio(const VectorField& v, SpectralWorkspace& ws);
double divergence_ratio(const SpectralVector& v, const SpectralWorkspace& ws);

/// Convolution with the heat kernel at time t >= 0: mode k times e^{-t|k|^2}.
ScalarField heat_convolve(const ScalarField& f, double t, SpectralWorkspace& ws);
VectorField heat_convolve(const VectorField& v, double t, SpectralWorkspace& ws);

// ---- Time integration ------------------------------------------------------

/// Trapezoid quadrature of s -> heat(t_i - s) * N(s) over [0, t_i] at every
/// node, computed in O(nodes) transforms by the recursion
///   A_0 = 0,  A_i = E (A_{i-1} + c_{i-1} N_{i-1}),  I_i = dt (A_i + N_i / 2)
/// with E = e^{-dt |k|^2}, c_0 = 1/2 and c_j = 1 otherwise (I_0 = 0).
///
/// Push the spectral integrand at successive nodes; each push returns the
/// integral at that node in spectral form.
class DuhamelAccumulator {
 public:
  DuhamelAccumulator(const SpectralWorkspace& ws, double dt);

  const SpectralVector& push(const SpectralVector& integrand);
  std::size_t nodes_seen() const noexcept { return count_; }

 private:
  std::vector<double> decay_;
  double dt_;
  std::size_t count_ = 0;
  SpectralVector history_;
  SpectralVector previous_;
  SpectralVector result_;
};

/// Duhamel term of a force sampled at the nodes of `tg`; node 0 is zero.
SpaceTimeField duhamel_force(const SpaceTimeField& force, const TimeGrid& tg,
                             SpectralWorkspace& ws);

/// Reference implementation: the trapezoid sum evaluated directly per node
/// (quadratic in the node count).
SpaceTimeField duhamel_force_direct(const SpaceTimeField& force, const TimeGrid& tg,
                                    SpectralWorkspace& ws);

// ---- Maximal function --------------------------------------------------------

/// Geometric ladder from half a cell (the one-cell ball) to half the smallest
/// extent.
std::vector<double> default_radius_ladder(const GridSpec& grid, std::size_t count = 12);

/// max over radii of the average of |f| over the cells whose centres lie in
/// the closed ball of that radius. Truncated grids clip the ball to the
/// domain; periodic grids wrap (each cell counted once). Balls with many
/// columns are summed by FFT convolution, exact up to round-off.
ScalarField maximal_function(const ScalarField& f, std::span<const double> radii);

/// Average of |f| over one discrete ball, by direct enumeration of all cells.
double ball_average(const ScalarField& f, const std::array<double, 3>& centre,
                    double radius);

// ---- Riesz potentials --------------------------------------------------------

/// Weight of the cell that contains the kernel singularity.
///   lattice_corrected: -V Z(n - sigma) with Z the (continued) Epstein zeta of
///                      the grid lattice; exact for locally constant |f|.
///   cell_analytic:     kernel integrated over an interval of width h (1D) or a
///                      ball of the cell's volume (3D).
enum class DiagonalRule { lattice_corrected, cell_analytic };

/// Sum over nonzero lattice points of |m h|^{-s}, analytically continued in s
/// (0 < s, s != dimension). `spacing` holds one value per active axis.
double lattice_zeta(double s, std::span<const double> spacing, int dimension);

double diagonal_weight(const GridSpec& grid, double sigma,
                       DiagonalRule rule = DiagonalRule::lattice_corrected);

/// int |f(y)| |x - y|^{sigma - n} dy at every cell centre of a truncated grid,
/// with f taken as zero outside the box.
ScalarField riesz_potential_direct(const ScalarField& f, double sigma,
                                   DiagonalRule rule = DiagonalRule::lattice_corrected);

/// The same quadrature at an arbitrary point by direct summation. A point
/// that coincides with a cell centre gets the diagonal weight for that cell;
/// otherwise all cells use the midpoint kernel value.
double riesz_potential_at(const ScalarField& f, double sigma, const std::array<double, 3>& x,
                          DiagonalRule rule = DiagonalRule::lattice_corrected);

/// One-dimensional potential of psi on [0, T], psi extended by zero.
ScalarField riesz_potential_1d(const ScalarField& psi, double sigma,
                               DiagonalRule rule = DiagonalRule::lattice_corrected);

// ---- Kernel estimates -------------------------------------------------------

/// |grad g_t(x)| (t^2 + |x|^4) for the 3D heat kernel g_t.
double grad_heat_kernel_defect(double t, const std::array<double, 3>& x);

/// max over x of |(phi * f)(x)| / (||phi||_1 M f(x)) on a periodic grid, with
/// phi centred at the origin node and the default radius ladder for M.
/// Throws unless phi is nonnegative and radially nonincreasing.
double radial_majorant_defect(const ScalarField& phi, const ScalarField& f);

/// True when phi >= 0 and phi is nonincreasing in the periodic distance from
/// the origin node (ties within `slack` relative).
bool is_radially_nonincreasing(const ScalarField& phi, double slack = 1e-12);

}  // namespace varns
