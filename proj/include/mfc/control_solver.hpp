#pragma once

#include "mfc/hamiltonian.hpp"
#include "mfc/simulator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mfc {

// Backward costate sweep Y^i_k along one realized ensemble. With sigma > 0
// the sweep is per-path (conditional on the common noise) and flagged
// non-certified: the martingale integrands of the exact adjoint are dropped.
struct AdjointSweep {
  dmat costates;  // (steps+1) x N
  bool certified = true;
  // tightest M_N(C) bounds of the transition matrices Phi+- at checkpoints
  std::vector<double> phi_plus_bounds, phi_minus_bounds;
};

struct ModeViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

AdjointSweep adjoint_sweep(const ModelSpec& m, const ControlPath& theta, const ParticleEnsemble& ens,
                           bool pathwise_ok = false, bool track_transitions = false);

// d theta_k of the discretized objective, divided by dt: rows are grid nodes,
// g_k = lambda (theta_k - eta_k) + sum_i f_theta(t_k, theta_k, X^i_k, mu_k) Y^i_{k+1}.
// The last node never enters the discretization, its row is zero.
dmat control_gradient(const ModelSpec& m, const ControlPath& theta, const ParticleEnsemble& ens,
                      const AdjointSweep& sweep);

struct SolveOptions {
  double tol = 1e-8;          // sup-norm of the scaled gradient
  int max_iter = 50000;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double step0 = 1.0;
  int max_halvings = 60;
  int noise_batch = 8;        // bundles when sigma > 0
  seed_t seed = 0;
  std::optional<ControlPath> warm_start;
};

struct SolveNoConvergence : std::runtime_error {
  double grad_norm;
  SolveNoConvergence(double g, int iters)
      : std::runtime_error("solve: gradient sup-norm " + std::to_string(g) + " above tolerance after " +
                           std::to_string(iters) + " iterations"),
        grad_norm(g) {}
};

struct SolveReport {
  ControlPath theta_star;
  double value = 0.0;
  std::vector<double> grad_norm_history;
  std::vector<seed_t> noise_seeds;
  int iterations = 0;
  double wall_time_ms = 0.0;
  bool deterministic_mode = true;
  bool converged = false;
  std::string diagnostics;
};

// Gradient descent with Armijo backtracking from theta = 0 on the sampled
// objective. Deterministic when sigma = 0; for sigma > 0 a frozen common-noise
// batch is optimized (common random numbers) and the report is flagged.
SolveReport solve(const ModelSpec& m, const dvec& x0, const TimeGrid& grid, const SolveOptions& opt = {});

// objective value and a fresh ensemble batch for a given control (the batch
// the solver itself optimizes against)
std::vector<NoiseBundle> solver_noise_batch(const ModelSpec& m, const TimeGrid& grid, const SolveOptions& opt);

struct RiccatiState {
  TimeGrid grid;
  std::vector<dmat> y;  // one symmetric N x N matrix per node
};

struct RiccatiBlowUp : std::runtime_error {
  int step;
  RiccatiBlowUp(int step_, double v)
      : std::runtime_error("riccati propagation blew up at step " + std::to_string(step_) + " (entry " +
                           std::to_string(v) + ")"),
        step(step_) {}
};

// Backward propagation of the second-derivative matrix Y(t) along the optimal
// path, deterministic mode: explicit Euler on
//   -dY/dt = Hxx + Y Hxp + Hpx Y + Y Hpp Y,   Y(T) = diag(U''(X_T)) / N,
// with the Hamiltonian blocks assembled from model second derivatives and the
// implicit-function sensitivities of the feedback minimizer.
RiccatiState riccati_propagate(const ModelSpec& m, const SolveReport& report, const ParticleEnsemble& ens,
                               double blowup_threshold = 1e8);

// Hamiltonian second-derivative blocks at one (t, x, p); exposed for tests
struct HamiltonianBlocks {
  dmat xx, xp, pp;  // N x N each; px = xp^T
  dvec theta_star;
};
HamiltonianBlocks hamiltonian_blocks(const ModelSpec& m, double t, const dvec& x, const dvec& p);

}  // namespace mfc
