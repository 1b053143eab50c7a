#pragma once

#include "mfc/model.hpp"

#include <stdexcept>
#include <vector>

namespace mfc {

// H_N(t,x,p,theta) = (lambda/2)|theta|^2 + sum_i f(t,theta,x_i,mu) p_i + (1/N) sum_i L(x_i)
double hamiltonian_value(const ModelSpec& m, double t, const dvec& x, const dvec& p, const dvec& theta);

struct MinimizerOptions {
  double residual_tol = 1e-10;
  int max_iter = 200;
  int max_halvings = 60;
  double hessian_floor = 1e-9;  // smallest admissible eigenvalue of the theta-Hessian
};

struct NonConvexHamiltonian : std::runtime_error {
  double eigenvalue;
  explicit NonConvexHamiltonian(double ev)
      : std::runtime_error("non-convexity detected: theta-Hessian eigenvalue " + std::to_string(ev)), eigenvalue(ev) {}
};

struct MinimizerNoConvergence : std::runtime_error {
  double residual;
  explicit MinimizerNoConvergence(double r)
      : std::runtime_error("feedback minimizer did not converge, residual " + std::to_string(r)), residual(r) {}
};

// theta* solving lambda theta + sum_i f_theta(t,theta,x_i,mu) p_i = 0 by damped
// Newton; one exact step when f is affine in theta. The control box, when set,
// is handled by projection with an active-set stationarity test.
dvec feedback_minimizer(const ModelSpec& m, double t, const dvec& x, const dvec& p, const MinimizerOptions& opt = {});

struct HypothesisAudit {
  double lambda0 = 0.0;      // sup over probes of N * |f_thth(t,theta,x_i,mu) p_i|
  double cq = 0.0;           // sup over probes of (phi + psi) * N * |p_i|, per the mixed-derivative bound
  double margin = 0.0;       // lambda - lambda0
  double f_theta_sup = 0.0;  // sup |f_theta| over probes
  bool r1_convex = true;     // smallest sampled eigenvalue of the x-Hessian of the minimized Hamiltonian >= -tol
  double min_hessian_eig = 0.0;
  int probes = 0;
  seed_t seed = 0;
  bool pass = false;  // margin > 0
};

struct AuditOptions {
  double x_max = 2.0;        // state sampling box half-width
  double theta_range = 2.0;  // theta sampling half-width (the probe range over an unbounded Theta)
  double tilde_c2 = 1.0;     // constant in the costate envelope
  std::vector<int> particle_counts = {1, 2, 4, 8};
  double r1_tol = 1e-6;
  int r1_budget = 8;  // x-Hessian sampling is O(N^2) evaluations, kept small
};

// Samples (x, p) from the admissible region (costates drawn inside the model's
// growth envelope) and reports empirical estimates for the convexity-margin
// constants; failure only sets flags.
HypothesisAudit audit_hypotheses(const ModelSpec& m, int probe_budget, seed_t seed, const AuditOptions& opt = {});

}  // namespace mfc
