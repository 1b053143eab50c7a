#pragma once

#include "mfc/control_path.hpp"
#include "mfc/model.hpp"

#include <stdexcept>
#include <vector>

namespace mfc {

// Finite-difference value function of the N = 1 problem on a truncated
// x-domain, explicit monotone scheme with upwind convection.
struct GridValueFunction {
  dvec x_nodes;      // uniform
  TimeGrid t_grid;
  dmat values;       // nodes() x nx
  std::vector<dmat> theta;  // one surface per control coordinate
  double viscosity = 0.0;   // grid regularization epsilon
  double boundary_influence = 0.0;  // width of the band touched by extrapolation

  double x_lo() const { return x_nodes[0]; }
  double x_hi() const { return x_nodes[x_nodes.size() - 1]; }
  double dx() const { return x_nodes[1] - x_nodes[0]; }

  double value_at(double t, double x) const;       // bilinear interpolation
  double derivative_at(double t, double x) const;  // central in x, linear in t
};

struct HjbConfig {
  double x_lo = -3.0;
  double x_hi = 3.0;
  int nx = 301;
  int nt = 0;  // 0: derive from the CFL condition
  std::vector<double> eps_ladder = {0.4, 0.2, 0.1, 0.05};
  double cfl_safety = 0.8;
};

struct CflViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// single-viscosity solve; eps_grid enters as (sigma^2 + eps^2)/2 d^2_xx
GridValueFunction hjb_solve_1d(const ModelSpec& m, const HjbConfig& cfg, double eps_grid);

// viscosity ladder with Richardson extrapolation (error ~ eps^2) to eps = 0
GridValueFunction hjb_solve_ladder(const ModelSpec& m, const HjbConfig& cfg);

struct GridExit : std::runtime_error {
  double location, time;
  GridExit(double x, double t)
      : std::runtime_error("feedback rollout left the grid at x = " + std::to_string(x) +
                           ", t = " + std::to_string(t) + "; widen the domain"),
        location(x),
        time(t) {}
};

struct Rollout {
  dvec trajectory;  // nodes()
  dmat control;     // nodes() x d
  double cost = 0.0;
};

// integrates dX = f(t, theta*(t,X), X, delta_X) dt with the feedback computed
// from the interpolated value-function slope
Rollout feedback_rollout(const ModelSpec& m, const GridValueFunction& vf, double x0);

}  // namespace mfc
