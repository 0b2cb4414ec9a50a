#pragma once

#include <cstddef>
#include <vector>

#include "varns/grid.hpp"

namespace varns {

/// Uniform time nodes 0 = t_0 < ... < t_steps = T.
struct TimeGrid {
  double T = 1.0;
  std::size_t steps = 1;

  TimeGrid() = default;
  TimeGrid(double final_time, std::size_t step_count);

  double dt() const noexcept { return T / static_cast<double>(steps); }
  std::size_t node_count() const noexcept { return steps + 1; }
  double node(std::size_t i) const noexcept;
  std::vector<double> nodes() const;

  bool operator==(const TimeGrid&) const = default;
};

/// One vector field per time node, all on one spatial grid.
class SpaceTimeField {
 public:
  SpaceTimeField() = default;
  /// Zero frames.
  SpaceTimeField(TimeGrid tg, const GridSpec& grid);
  SpaceTimeField(TimeGrid tg, std::vector<VectorField> frames);

  const TimeGrid& time_grid() const noexcept { return tg_; }
  const GridSpec& grid() const noexcept { return frames_.front().grid(); }
  std::size_t frame_count() const noexcept { return frames_.size(); }
  const VectorField& frame(std::size_t i) const { return frames_.at(i); }
  VectorField& frame(std::size_t i) { return frames_.at(i); }
  const std::vector<VectorField>& frames() const noexcept { return frames_; }

  SpaceTimeField& operator*=(double c);
  SpaceTimeField& operator+=(const SpaceTimeField& other);
  SpaceTimeField& operator-=(const SpaceTimeField& other);

 private:
  TimeGrid tg_;
  std::vector<VectorField> frames_;
};

SpaceTimeField operator*(double c, SpaceTimeField u);
SpaceTimeField operator+(SpaceTimeField a, const SpaceTimeField& b);
SpaceTimeField operator-(SpaceTimeField a, const SpaceTimeField& b);

/// Every `space_factor`-th spatial node and `time_factor`-th time node of a
/// periodic space-time field.
SpaceTimeField restrict_periodic(const SpaceTimeField& fine, std::size_t space_factor,
                                 std::size_t time_factor);

}  // namespace varns
