#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace varns {

enum class Topology : unsigned char { periodic = 0, truncated = 1 };

std::string to_string(Topology t);
Topology topology_from_string(const std::string& s);

/// Uniform tensor grid on a 1D interval or a 3D box.
///
/// Truncated grids sample cell centres (origin + (i + 1/2) h); periodic grids
/// sample the FFT nodes (origin + i h). Both use the same quadrature weight
/// h_1 * ... * h_d per point, i.e. the midpoint / rectangle rule.
/// Only the first `dimension` axes are meaningful; unused axes carry
/// resolution 1 and extent 1.
struct GridSpec {
  int dimension = 1;
  std::array<double, 3> extents{1.0, 1.0, 1.0};
  std::array<std::size_t, 3> resolution{2, 1, 1};
  Topology topology = Topology::truncated;
  std::array<double, 3> origin{0.0, 0.0, 0.0};

  static GridSpec line(double lo, double hi, std::size_t n,
                       Topology topology = Topology::truncated);
  static GridSpec box(double lo, double hi, std::size_t n,
                      Topology topology = Topology::truncated);
  /// Periodic cube [0, length)^3.
  static GridSpec torus(std::size_t n, double length);

  /// Throws on resolution < 2, non-positive extents, or a bad dimension.
  void validate() const;

  std::size_t size() const noexcept {
    return resolution[0] * resolution[1] * resolution[2];
  }
  double spacing(int axis) const noexcept {
    return extents[axis] / static_cast<double>(resolution[axis]);
  }
  double cell_weight() const noexcept;
  /// Total measure of the domain.
  double measure() const noexcept;
  double coordinate(int axis, std::size_t i) const noexcept;
  /// Physical position of flat (row-major, axis 0 slowest) index.
  std::array<double, 3> point(std::size_t flat) const noexcept;
  std::array<std::size_t, 3> unflatten(std::size_t flat) const noexcept;
  std::size_t flatten(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return (i * resolution[1] + j) * resolution[2] + k;
  }

  /// Same grid with every active axis resolution multiplied by `factor`.
  GridSpec refined(std::size_t factor) const;

  /// Truncated grids only: half the spacing on a box widened by h/4 per side
  /// (2n + 1 cells per axis), so every cell centre of this grid is also a cell
  /// centre of the result.
  GridSpec nested_refinement() const;

  bool operator==(const GridSpec&) const = default;
};

double norm3(const std::array<double, 3>& x) noexcept;

class ScalarField {
 public:
  ScalarField() = default;
  /// Zero field.
  explicit ScalarField(GridSpec grid);
  /// Throws if the sample count does not match or a sample is not finite.
  ScalarField(GridSpec grid, std::vector<double> values);

  template <class F>
  static ScalarField from_function(const GridSpec& grid, F&& fn) {
    std::vector<double> v(grid.size());
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = fn(grid.point(n));
    return ScalarField(grid, std::move(v));
  }

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  bool is_zero() const noexcept;
  double max_abs() const noexcept;

  ScalarField& operator*=(double c);
  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

ScalarField operator*(double c, ScalarField f);
ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField abs(ScalarField f);
/// Pointwise product.
ScalarField product(const ScalarField& a, const ScalarField& b);

/// Three components on one shared grid.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(GridSpec grid);
  VectorField(GridSpec grid, std::array<std::vector<double>, 3> comps);
  VectorField(const ScalarField& x, const ScalarField& y, const ScalarField& z);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> component(int c) const noexcept { return comps_[c]; }
  std::span<double> component(int c) noexcept { return comps_[c]; }
  ScalarField component_field(int c) const;
  /// Pointwise Euclidean magnitude.
  ScalarField magnitude() const;
  double max_abs() const noexcept;

  VectorField& operator*=(double c);
  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);

 private:
  GridSpec grid_;
  std::array<std::vector<double>, 3> comps_;
};

VectorField operator*(double c, VectorField v);
VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);

/// 3x3 tensor field (e.g. u ⊗ u or a force potential F), row-major components.
struct TensorField {
  GridSpec grid;
  std::array<std::vector<double>, 9> comps;

  explicit TensorField(GridSpec g);
  std::span<const double> component(int row, int col) const noexcept {
    return comps[row * 3 + col];
  }
  std::span<double> component(int row, int col) noexcept { return comps[row * 3 + col]; }
};

/// Restrict a field on `fine` to the nested coarse grid (every factor-th
/// point). Periodic grids only: their nodes nest exactly.
ScalarField restrict_periodic(const ScalarField& fine, std::size_t factor);
VectorField restrict_periodic(const VectorField& fine, std::size_t factor);

}  // namespace varns
