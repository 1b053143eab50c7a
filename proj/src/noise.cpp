#include "mfc/noise.hpp"

#include <cmath>
#include <random>

namespace mfc {

NoiseBundle make_noise(const TimeGrid& grid, seed_t seed, int idio_particles) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sdt = std::sqrt(grid.dt());
  NoiseBundle b;
  b.grid = grid;
  b.seed = seed;
  b.common = dvec::NullaryExpr(grid.steps, [&](Eigen::Index) { return sdt * gauss(rng); });
  if (idio_particles > 0) {
    b.idiosyncratic.resize(grid.steps, idio_particles);
    for (int k = 0; k < grid.steps; ++k)
      for (int i = 0; i < idio_particles; ++i) b.idiosyncratic(k, i) = sdt * gauss(rng);
  }
  return b;
}

NoiseBundle zero_noise(const TimeGrid& grid) {
  NoiseBundle b;
  b.grid = grid;
  b.common = dvec::Zero(grid.steps);
  return b;
}

std::vector<NoiseBundle> make_noise_batch(const TimeGrid& grid, seed_t seed, int count, int idio_particles) {
  std::vector<NoiseBundle> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(make_noise(grid, seed + static_cast<seed_t>(i), idio_particles));
  return out;
}

}  // namespace mfc
