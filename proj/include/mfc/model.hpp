#pragma once

#include "mfc/empirical_measure.hpp"
#include "mfc/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mfc {

// |phi'(x)| <= c11 |x| + c10 and |phi''(x)| <= c20 for a cost function phi
struct GrowthBound {
  double c11 = 0.0;
  double c10 = 0.0;
  double c20 = 0.0;
};

// Problem data: drift f(t, theta, x, mu) with its partial derivatives,
// running cost L, terminal cost U, noise intensities and the regularizer.
// Derivatives are user-supplied; validate_model cross-checks them against
// finite differences at registration.
struct ModelSpec {
  using Fn = std::function<double(double, const dvec&, double, const EmpiricalMeasure&)>;
  using FnV = std::function<dvec(double, const dvec&, double, const EmpiricalMeasure&)>;
  using FnM = std::function<dmat(double, const dvec&, double, const EmpiricalMeasure&)>;
  using FnMu = std::function<double(double, const dvec&, double, const EmpiricalMeasure&, double)>;
  using FnMuV = std::function<dvec(double, const dvec&, double, const EmpiricalMeasure&, double)>;
  using Scal = std::function<double(double)>;

  std::string name;
  int control_dim = 1;

  Fn f;             // drift
  FnV f_theta;      // d f / d theta, size d
  Fn f_x;           // d f / d x
  FnMu f_mu;        // Wasserstein derivative, evaluated at atom y (last argument)
  FnM f_theta_theta;  // d x d
  FnV f_theta_x;      // size d
  Fn f_xx;
  FnMu f_x_mu;
  FnMuV f_theta_mu;   // size d

  Scal L, L1, L2;   // running cost with first and second derivative
  Scal U, U1, U2;   // terminal cost with first and second derivative
  GrowthBound growth_L, growth_U;

  // Optional per-particle terminal cost Phi(x, c_i) for data that rides along
  // the dynamics as a frozen coordinate (supervised labels). When `frozen`
  // is nonempty it replaces U in objectives and adjoint terminal data.
  std::function<double(double, double)> pair_cost, pair_cost_dx, pair_cost_dxx;
  dvec frozen;

  // optional reference parameter path eta(t); regularizer becomes |theta - eta|^2
  std::function<dvec(double)> theta_reference;

  double sigma = 0.0;    // common-noise intensity
  double epsilon = 0.0;  // idiosyncratic intensity
  double lambda = 1.0;   // regularizer weight, > 0
  double horizon = 1.0;  // T
  std::optional<double> control_box;  // Theta_{R2}: per-coordinate |theta_i| <= R2

  bool has_pair_cost() const { return frozen.size() > 0; }

  double terminal(int i, double x) const { return has_pair_cost() ? pair_cost(x, frozen[i]) : U(x); }
  double terminal_d(int i, double x) const { return has_pair_cost() ? pair_cost_dx(x, frozen[i]) : U1(x); }
  double terminal_dd(int i, double x) const { return has_pair_cost() ? pair_cost_dxx(x, frozen[i]) : U2(x); }

  dvec reference_at(double t) const {
    return theta_reference ? theta_reference(t) : dvec(dvec::Zero(control_dim));
  }

  dvec clamp_control(dvec theta) const {
    if (control_box) theta = theta.cwiseMax(-*control_box).cwiseMin(*control_box);
    return theta;
  }
};

struct ValidationOptions {
  int derivative_probes = 12;
  double fd_step = 1e-6;
  double fd_rel_tol = 2e-4;
  int growth_samples = 33;     // log-spaced |x| grid per sign
  double growth_x_max = 1e3;
  seed_t seed = 20240801;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> issues;
};

// Checks scalar invariants (lambda > 0, horizon > 0, epsilon >= 0), cost
// positivity and the stored growth constants on a log-spaced grid, and
// cross-checks every supplied drift derivative against finite differences.
ValidationReport validate_model(const ModelSpec& m, const ValidationOptions& opt = {});

}  // namespace mfc
