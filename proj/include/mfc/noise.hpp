#pragma once

#include "mfc/time_grid.hpp"
#include "mfc/types.hpp"

#include <vector>

namespace mfc {

// Brownian increments on a grid: one common path W^0 shared by every
// particle, plus optional per-particle idiosyncratic paths W^1..W^N.
struct NoiseBundle {
  TimeGrid grid;
  dvec common;          // steps increments, Var = dt
  dmat idiosyncratic;   // steps x N, absent when 0 x 0
  seed_t seed = 0;

  bool has_idiosyncratic() const { return idiosyncratic.size() > 0; }
  int idio_particles() const { return static_cast<int>(idiosyncratic.cols()); }
};

NoiseBundle make_noise(const TimeGrid& grid, seed_t seed, int idio_particles = 0);
NoiseBundle zero_noise(const TimeGrid& grid);
std::vector<NoiseBundle> make_noise_batch(const TimeGrid& grid, seed_t seed, int count, int idio_particles = 0);

}  // namespace mfc
