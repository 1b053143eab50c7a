#pragma once

#include "mfc/control_path.hpp"
#include "mfc/model.hpp"
#include "mfc/noise.hpp"

#include <stdexcept>
#include <vector>

namespace mfc {

// Forward Euler-Maruyama trajectories of the N-particle system.
struct ParticleEnsemble {
  TimeGrid grid;
  dmat states;  // (steps+1) x N
  seed_t seed = 0;

  int particles() const { return static_cast<int>(states.cols()); }
};

struct IntegrationDiverged : std::runtime_error {
  int step;
  double value;
  IntegrationDiverged(int step_, double value_)
      : std::runtime_error("integration diverged at step " + std::to_string(step_)), step(step_), value(value_) {}
};

// drift magnitudes beyond this abort the run; valid models never reach it
inline constexpr double kBlowUpThreshold = 1e12;

// X^i_{k+1} = X^i_k + f(t_k, theta_k, X^i_k, mu_k) dt + sigma dW0_k + epsilon dWi_k
ParticleEnsemble simulate(const ModelSpec& m, const ControlPath& theta, const dvec& x0, const NoiseBundle& noise);

// cost of one realized path: left-endpoint quadrature of the running cost
// and the regularizer plus the terminal cost
double pathwise_cost(const ModelSpec& m, const ControlPath& theta, const ParticleEnsemble& ens);

// Monte-Carlo objective over a batch of noise bundles (exact single path when
// sigma = epsilon = 0)
double objective(const ModelSpec& m, const ControlPath& theta, const dvec& x0, const std::vector<NoiseBundle>& batch);

struct MomentAudit {
  dvec max_moment;  // per particle, max_k of the batch mean of |X^i_k|^2
  dvec bound;       // c1 * (1 + |x_i|^2 + int |f(s,theta_s,0,delta_0)|^2 ds + mean_j |x_j|^2)
  double c1 = 1.0;
  double max_ratio = 0.0;  // max_i max_moment_i / (bound_i / c1); the smallest passing c1
  bool pass = true;
};

MomentAudit moment_audit(const std::vector<ParticleEnsemble>& batch, const ControlPath& theta, const ModelSpec& m,
                         double c1);

}  // namespace mfc
