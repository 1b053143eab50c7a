#pragma once

#include <stdexcept>

namespace mfc {

// Uniform grid on [t0, t1] with `steps` intervals, steps+1 nodes.
struct TimeGrid {
  double t0 = 0.0;
  double t1 = 1.0;
  int steps = 1;

  TimeGrid() = default;
  TimeGrid(double t0_, double t1_, int steps_) : t0(t0_), t1(t1_), steps(steps_) {
    if (!(t0 < t1)) throw std::invalid_argument("TimeGrid: t0 must be < t1");
    if (steps < 1) throw std::invalid_argument("TimeGrid: steps must be >= 1");
  }

  double dt() const { return (t1 - t0) / steps; }
  int nodes() const { return steps + 1; }
  double node(int k) const { return t0 + k * dt(); }
};

inline bool same_grid(const TimeGrid& a, const TimeGrid& b) {
  return a.t0 == b.t0 && a.t1 == b.t1 && a.steps == b.steps;
}

}  // namespace mfc
