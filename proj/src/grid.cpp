#include "varns/grid.hpp"

#include <algorithm>
#include <cmath>

#include "varns/error.hpp"

namespace varns {

std::string to_string(Topology t) {
  return t == Topology::periodic ? "periodic" : "truncated";
}

Topology topology_from_string(const std::string& s) {
  if (s == "periodic") return Topology::periodic;
  if (s == "truncated") return Topology::truncated;
  throw Error(ErrorKind::invalid_argument, "unknown topology '" + s + "'");
}

GridSpec GridSpec::line(double lo, double hi, std::size_t n, Topology topology) {
  GridSpec g;
  g.dimension = 1;
  g.extents = {hi - lo, 1.0, 1.0};
  g.resolution = {n, 1, 1};
  g.topology = topology;
  g.origin = {lo, 0.0, 0.0};
  g.validate();
  return g;
}

GridSpec GridSpec::box(double lo, double hi, std::size_t n, Topology topology) {
  GridSpec g;
  g.dimension = 3;
  g.extents = {hi - lo, hi - lo, hi - lo};
  g.resolution = {n, n, n};
  g.topology = topology;
  g.origin = {lo, lo, lo};
  g.validate();
  return g;
}

GridSpec GridSpec::torus(std::size_t n, double length) {
  return box(0.0, length, n, Topology::periodic);
}

void GridSpec::validate() const {
  require(dimension == 1 || dimension == 3, "grid dimension must be 1 or 3");
  for (int a = 0; a < 3; ++a) {
    if (a < dimension) {
      require(resolution[a] >= 2, "grid resolution must be >= 2 on every axis");
      require(std::isfinite(extents[a]) && extents[a] > 0.0,
              "grid extents must be finite and positive");
      require(std::isfinite(origin[a]), "grid origin must be finite");
    } else {
      require(resolution[a] == 1, "unused grid axes must have resolution 1");
    }
  }
}

double GridSpec::cell_weight() const noexcept {
  double w = 1.0;
  for (int a = 0; a < dimension; ++a) w *= spacing(a);
  return w;
}

double GridSpec::measure() const noexcept {
  double m = 1.0;
  for (int a = 0; a < dimension; ++a) m *= extents[a];
  return m;
}

double GridSpec::coordinate(int axis, std::size_t i) const noexcept {
  if (axis >= dimension) return 0.0;
  const double offset = topology == Topology::truncated ? 0.5 : 0.0;
  return origin[axis] + (static_cast<double>(i) + offset) * spacing(axis);
}

std::array<std::size_t, 3> GridSpec::unflatten(std::size_t flat) const noexcept {
  const std::size_t k = flat % resolution[2];
  const std::size_t rest = flat / resolution[2];
  return {rest / resolution[1], rest % resolution[1], k};
}

std::array<double, 3> GridSpec::point(std::size_t flat) const noexcept {
  const auto idx = unflatten(flat);
  return {coordinate(0, idx[0]), coordinate(1, idx[1]), coordinate(2, idx[2])};
}

GridSpec GridSpec::refined(std::size_t factor) const {
  GridSpec g = *this;
  for (int a = 0; a < dimension; ++a) g.resolution[a] *= factor;
  return g;
}

GridSpec GridSpec::nested_refinement() const {
  require(topology == Topology::truncated, "nested refinement needs a truncated grid");
  GridSpec g = *this;
  for (int a = 0; a < dimension; ++a) {
    const double h = spacing(a);
    g.resolution[a] = 2 * resolution[a] + 1;
    g.extents[a] = extents[a] + 0.5 * h;
    g.origin[a] = origin[a] - 0.25 * h;
  }
  return g;
}

double norm3(const std::array<double, 3>& x) noexcept {
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(GridSpec grid) : grid_(grid), values_(grid.size(), 0.0) {
  grid_.validate();
}

ScalarField::ScalarField(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  require(values_.size() == grid_.size(), "sample count does not match grid size",
          ErrorKind::grid_mismatch);
  for (double v : values_)
    require(std::isfinite(v), "scalar field sample is not finite");
}

bool ScalarField::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double ScalarField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

ScalarField& ScalarField::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require(grid_ == other.grid_, "grid mismatch", ErrorKind::grid_mismatch);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require(grid_ == other.grid_, "grid mismatch", ErrorKind::grid_mismatch);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarField operator*(double c, ScalarField f) { return f *= c; }
ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }

ScalarField abs(ScalarField f) {
  for (double& v : f.values()) v = std::abs(v);
  return f;
}

ScalarField product(const ScalarField& a, const ScalarField& b) {
  require(a.grid() == b.grid(), "grid mismatch", ErrorKind::grid_mismatch);
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

// ---------------------------------------------------------------------------

VectorField::VectorField(GridSpec grid) : grid_(grid) {
  grid_.validate();
  for (auto& c : comps_) c.assign(grid_.size(), 0.0);
}

VectorField::VectorField(GridSpec grid, std::array<std::vector<double>, 3> comps)
    : grid_(grid), comps_(std::move(comps)) {
  grid_.validate();
  for (const auto& c : comps_)
    require(c.size() == grid_.size(), "component size does not match grid",
            ErrorKind::grid_mismatch);
}

VectorField::VectorField(const ScalarField& x, const ScalarField& y, const ScalarField& z)
    : grid_(x.grid()) {
  require(y.grid() == grid_ && z.grid() == grid_,
          "vector components must share one grid", ErrorKind::grid_mismatch);
  comps_[0].assign(x.values().begin(), x.values().end());
  comps_[1].assign(y.values().begin(), y.values().end());
  comps_[2].assign(z.values().begin(), z.values().end());
}

ScalarField VectorField::component_field(int c) const {
  return ScalarField(grid_, comps_[c]);
}

ScalarField VectorField::magnitude() const {
  std::vector<double> m(grid_.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    m[i] = std::hypot(comps_[0][i], comps_[1][i], comps_[2][i]);
  return ScalarField(grid_, std::move(m));
}

double VectorField::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& c : comps_)
    for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

VectorField& VectorField::operator*=(double c) {
  for (auto& comp : comps_)
    for (double& v : comp) v *= c;
  return *this;
}

VectorField& VectorField::operator+=(const VectorField& other) {
  require(grid_ == other.grid_, "grid mismatch", ErrorKind::grid_mismatch);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < comps_[c].size(); ++i) comps_[c][i] += other.comps_[c][i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  require(grid_ == other.grid_, "grid mismatch", ErrorKind::grid_mismatch);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < comps_[c].size(); ++i) comps_[c][i] -= other.comps_[c][i];
  return *this;
}

VectorField operator*(double c, VectorField v) { return v *= c; }
VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }

TensorField::TensorField(GridSpec g) : grid(g) {
  for (auto& c : comps) c.assign(grid.size(), 0.0);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> restrict_values(const GridSpec& fine, const GridSpec& coarse,
                                    std::span<const double> values, std::size_t factor) {
  std::vector<double> out(coarse.size());
  for (std::size_t n = 0; n < out.size(); ++n) {
    const auto c = coarse.unflatten(n);
    const std::size_t fi = c[0] * (fine.dimension >= 1 ? factor : 1);
    const std::size_t fj = fine.dimension == 3 ? c[1] * factor : 0;
    const std::size_t fk = fine.dimension == 3 ? c[2] * factor : 0;
    out[n] = values[fine.flatten(fi, fj, fk)];
  }
  return out;
}

GridSpec coarsened(const GridSpec& fine, std::size_t factor) {
  require(fine.topology == Topology::periodic, "restriction requires a periodic grid");
  require(factor >= 1, "restriction factor must be >= 1");
  GridSpec g = fine;
  for (int a = 0; a < fine.dimension; ++a) {
    require(fine.resolution[a] % factor == 0, "resolution not divisible by factor");
    g.resolution[a] = fine.resolution[a] / factor;
  }
  g.validate();
  return g;
}

}  // namespace

ScalarField restrict_periodic(const ScalarField& fine, std::size_t factor) {
  const GridSpec coarse = coarsened(fine.grid(), factor);
  return ScalarField(coarse, restrict_values(fine.grid(), coarse, fine.values(), factor));
}

VectorField restrict_periodic(const VectorField& fine, std::size_t factor) {
  const GridSpec coarse = coarsened(fine.grid(), factor);
  std::array<std::vector<double>, 3> comps;
  for (int c = 0; c < 3; ++c)
    comps[c] = restrict_values(fine.grid(), coarse, fine.component(c), factor);
  return VectorField(coarse, std::move(comps));
}

}  // namespace varns
