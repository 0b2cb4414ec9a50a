#include "varns/spacetime.hpp"

#include <cmath>

#include "varns/error.hpp"

namespace varns {

TimeGrid::TimeGrid(double final_time, std::size_t step_count)
    : T(final_time), steps(step_count) {
  require(std::isfinite(T) && T > 0.0, "final time must be positive");
  require(steps >= 1, "time grid needs at least one step");
}

double TimeGrid::node(std::size_t i) const noexcept {
  return i == steps ? T : static_cast<double>(i) * dt();
}

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> t(node_count());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = node(i);
  return t;
}

SpaceTimeField::SpaceTimeField(TimeGrid tg, const GridSpec& grid)
    : tg_(tg), frames_(tg.node_count(), VectorField(grid)) {}

SpaceTimeField::SpaceTimeField(TimeGrid tg, std::vector<VectorField> frames)
    : tg_(tg), frames_(std::move(frames)) {
  require(frames_.size() == tg_.node_count(), "frame count must equal node count",
          ErrorKind::grid_mismatch);
  for (const auto& f : frames_)
    require(f.grid() == frames_.front().grid(), "frames must share one grid",
            ErrorKind::grid_mismatch);
}

SpaceTimeField& SpaceTimeField::operator*=(double c) {
  for (auto& f : frames_) f *= c;
  return *this;
}

SpaceTimeField& SpaceTimeField::operator+=(const SpaceTimeField& other) {
  require(tg_ == other.tg_, "time grid mismatch", ErrorKind::grid_mismatch);
  for (std::size_t i = 0; i < frames_.size(); ++i) frames_[i] += other.frames_[i];
  return *this;
}

SpaceTimeField& SpaceTimeField::operator-=(const SpaceTimeField& other) {
  require(tg_ == other.tg_, "time grid mismatch", ErrorKind::grid_mismatch);
  for (std::size_t i = 0; i < frames_.size(); ++i) frames_[i] -= other.frames_[i];
  return *this;
}

SpaceTimeField operator*(double c, SpaceTimeField u) { return u *= c; }
SpaceTimeField operator+(SpaceTimeField a, const SpaceTimeField& b) { return a += b; }
SpaceTimeField operator-(SpaceTimeField a, const SpaceTimeField& b) { return a -= b; }

SpaceTimeField restrict_periodic(const SpaceTimeField& fine, std::size_t space_factor,
                                 std::size_t time_factor) {
  const TimeGrid& tg = fine.time_grid();
  require(time_factor >= 1 && tg.steps % time_factor == 0,
          "time steps not divisible by the restriction factor", ErrorKind::grid_mismatch);
  TimeGrid coarse(tg.T, tg.steps / time_factor);
  std::vector<VectorField> frames;
  frames.reserve(coarse.node_count());
  for (std::size_t i = 0; i < coarse.node_count(); ++i)
    frames.push_back(restrict_periodic(fine.frame(i * time_factor), space_factor));
  return SpaceTimeField(coarse, std::move(frames));
}

}  // namespace varns
