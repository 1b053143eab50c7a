#include "mfc/control_solver.hpp"

#include "mfc/scaled_matrix.hpp"

#include <chrono>
#include <cmath>

namespace mfc {
namespace {

// A^N_{ij} = delta_ij f_x(t,theta,X^j,mu) + (1/N) f_mu(t,theta,X^j,mu,X^i):
// the transpose of the drift Jacobian, the coupling of the adjoint equation
dmat adjoint_coupling(const ModelSpec& m, double t, const dvec& theta, const dvec& x) {
  const int n = static_cast<int>(x.size());
  const EmpiricalMeasure mu{x};
  dmat a(n, n);
  for (int j = 0; j < n; ++j) {
    const double fx = m.f_x(t, theta, x[j], mu);
    for (int i = 0; i < n; ++i) a(i, j) = m.f_mu(t, theta, x[j], mu, x[i]) / n + (i == j ? fx : 0.0);
  }
  return a;
}

}  // namespace

AdjointSweep adjoint_sweep(const ModelSpec& m, const ControlPath& theta, const ParticleEnsemble& ens,
                           bool pathwise_ok, bool track_transitions) {
  if (m.epsilon > 0.0) throw ModeViolation("adjoint sweep requires epsilon = 0");
  if (m.sigma != 0.0 && !pathwise_ok) throw ModeViolation("adjoint sweep with sigma > 0 requires the pathwise flag");

  const TimeGrid& g = ens.grid;
  const int n = ens.particles();
  const double dt = g.dt();

  AdjointSweep sweep;
  sweep.certified = (m.sigma == 0.0);
  sweep.costates.resize(g.nodes(), n);
  for (int i = 0; i < n; ++i) sweep.costates(g.steps, i) = m.terminal_d(i, ens.states(g.steps, i)) / n;

  dmat phi_plus, phi_minus;
  if (track_transitions) {
    phi_plus = dmat::Identity(n, n);
    phi_minus = dmat::Identity(n, n);
  }

  dvec y = sweep.costates.row(g.steps).transpose();
  for (int k = g.steps - 1; k >= 0; --k) {
    const double t = g.node(k);
    const dvec th = theta.at(k);
    const dvec x = ens.states.row(k).transpose();
    const dmat a = adjoint_coupling(m, t, th, x);
    dvec rhs = a * y;
    for (int i = 0; i < n; ++i) rhs[i] += m.L1(x[i]) / n;
    y += dt * rhs;
    sweep.costates.row(k) = y.transpose();
    if (track_transitions) {
      phi_plus -= dt * (a * phi_plus);
      phi_minus += dt * (phi_minus * a);
      if (k % std::max(1, g.steps / 8) == 0) {
        sweep.phi_plus_bounds.push_back(tightest_scaled_bound(phi_plus));
        sweep.phi_minus_bounds.push_back(tightest_scaled_bound(phi_minus));
      }
    }
  }
  return sweep;
}

dmat control_gradient(const ModelSpec& m, const ControlPath& theta, const ParticleEnsemble& ens,
                      const AdjointSweep& sweep) {
  const TimeGrid& g = ens.grid;
  const int n = ens.particles();
  dmat grad = dmat::Zero(g.nodes(), m.control_dim);
  for (int k = 0; k < g.steps; ++k) {
    const double t = g.node(k);
    const dvec th = theta.at(k);
    const dvec x = ens.states.row(k).transpose();
    const EmpiricalMeasure mu{x};
    dvec gk = m.lambda * (th - m.reference_at(t));
    for (int i = 0; i < n; ++i) gk += m.f_theta(t, th, x[i], mu) * sweep.costates(k + 1, i);
    grad.row(k) = gk.transpose();
  }
  return grad;
}

std::vector<NoiseBundle> solver_noise_batch(const ModelSpec& m, const TimeGrid& grid, const SolveOptions& opt) {
  if (m.sigma == 0.0) return {zero_noise(grid)};
  return make_noise_batch(grid, opt.seed, std::max(1, opt.noise_batch));
}

SolveReport solve(const ModelSpec& m, const dvec& x0, const TimeGrid& grid, const SolveOptions& opt) {
  if (m.epsilon > 0.0) throw ModeViolation("solve requires epsilon = 0 (adjoint mode)");
  const auto t_start = std::chrono::steady_clock::now();
  const std::vector<NoiseBundle> batch = solver_noise_batch(m, grid, opt);
  const double dt = grid.dt();

  SolveReport rep;
  rep.deterministic_mode = (m.sigma == 0.0);
  if (!rep.deterministic_mode)
    rep.diagnostics = "sigma > 0: open-loop control optimized against a frozen common-noise batch";
  for (const auto& b : batch) rep.noise_seeds.push_back(b.seed);

  ControlPath theta = opt.warm_start ? *opt.warm_start : ControlPath::zero(grid, m.control_dim);
  if (!same_grid(theta.grid, grid) || theta.dim() != m.control_dim)
    throw std::invalid_argument("solve: warm start grid or dimension mismatch");

  std::vector<ParticleEnsemble> ensembles(batch.size());
  auto eval = [&](const ControlPath& th) {
    double acc = 0.0;
    for (std::size_t b = 0; b < batch.size(); ++b) {
      ensembles[b] = simulate(m, th, x0, batch[b]);
      acc += pathwise_cost(m, th, ensembles[b]);
    }
    return acc / batch.size();
  };

  double value = eval(theta);
  double step = opt.step0;
  bool converged = false;
  int iter = 0;
  for (; iter < opt.max_iter; ++iter) {
    dmat grad = dmat::Zero(grid.nodes(), m.control_dim);
    for (std::size_t b = 0; b < batch.size(); ++b)
      grad += control_gradient(m, theta, ensembles[b], adjoint_sweep(m, theta, ensembles[b], true));
    grad /= static_cast<double>(batch.size());

    const double gnorm = grad.cwiseAbs().maxCoeff();
    rep.grad_norm_history.push_back(gnorm);
    if (gnorm <= opt.tol) {
      converged = true;
      break;
    }

    const double slope = grad.squaredNorm() * dt;  // directional derivative along -grad
    step = std::min(step * 2.0, 1e6);
    bool accepted = false;
    for (int half = 0; half <= opt.max_halvings; ++half) {
      ControlPath cand(grid, theta.values - step * grad);
      if (m.control_box) cand.values = cand.values.cwiseMax(-*m.control_box).cwiseMin(*m.control_box);
      const double v = eval(cand);
      // the 1e-14 allowance keeps the search from dead-locking on roundoff
      // once descent increments fall below double precision
      if (v <= value - opt.armijo_c * step * slope + 1e-14 * (1.0 + std::abs(value))) {
        theta = std::move(cand);
        value = v;
        accepted = true;
        break;
      }
      step *= opt.backtrack;
    }
    if (!accepted) throw SolveNoConvergence(gnorm, iter);
    if (!std::isfinite(value)) throw IntegrationDiverged(iter, value);
  }
  if (!converged) {
    const double g = rep.grad_norm_history.empty() ? 0.0 : rep.grad_norm_history.back();
    throw SolveNoConvergence(g, iter);
  }

  // make sure the cached ensembles correspond to the accepted control
  value = eval(theta);
  // right-continuous extension of the piecewise-constant control at t1; the
  // last node never enters the objective
  if (grid.steps >= 1) theta.values.row(grid.steps) = theta.values.row(grid.steps - 1);

  rep.theta_star = std::move(theta);
  rep.value = value;
  rep.iterations = iter;
  rep.converged = true;
  rep.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count();
  return rep;
}

// Second derivatives of the minimized Hamiltonian via the envelope theorem
// and implicit differentiation of the first-order condition: with
// M = lambda I + sum_i f_thth p_i and G_x, F the mixed blocks,
//   Hxx = Hxx|_theta - Gx^T M^-1 Gx,  Hxp = A - Gx^T M^-1 F,  Hpp = -F^T M^-1 F,
// where Hxp(k,l) = d^2 H / dx_k dp_l and A is the adjoint coupling matrix.
HamiltonianBlocks hamiltonian_blocks(const ModelSpec& m, double t, const dvec& x, const dvec& p) {
  const int n = static_cast<int>(x.size());
  const int d = m.control_dim;
  const EmpiricalMeasure mu{x};
  HamiltonianBlocks blocks;
  blocks.theta_star = feedback_minimizer(m, t, x, p);
  const dvec& ts = blocks.theta_star;

  dmat big_m = m.lambda * dmat::Identity(d, d);
  for (int i = 0; i < n; ++i) big_m += m.f_theta_theta(t, ts, x[i], mu) * p[i];
  const Eigen::LDLT<dmat> mf(big_m);

  dmat gx(d, n), fth(d, n);
  for (int l = 0; l < n; ++l) {
    dvec col = m.f_theta_x(t, ts, x[l], mu) * p[l];
    for (int i = 0; i < n; ++i) col += m.f_theta_mu(t, ts, x[i], mu, x[l]) * p[i] / n;
    gx.col(l) = col;
    fth.col(l) = m.f_theta(t, ts, x[l], mu);
  }
  const dmat minv_gx = mf.solve(gx);
  const dmat minv_f = mf.solve(fth);

  dmat hxx_fixed = dmat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    hxx_fixed(k, k) += m.L2(x[k]) / n + m.f_xx(t, ts, x[k], mu) * p[k];
    for (int l = 0; l < n; ++l) {
      hxx_fixed(k, l) += m.f_x_mu(t, ts, x[k], mu, x[l]) * p[k] / n;
      hxx_fixed(k, l) += m.f_x_mu(t, ts, x[l], mu, x[k]) * p[l] / n;
    }
  }
  blocks.xx = hxx_fixed - gx.transpose() * minv_gx;
  blocks.xp = adjoint_coupling(m, t, ts, x) - gx.transpose() * minv_f;
  blocks.pp = -fth.transpose() * minv_f;
  return blocks;
}

RiccatiState riccati_propagate(const ModelSpec& m, const SolveReport& report, const ParticleEnsemble& ens,
                               double blowup_threshold) {
  if (m.sigma != 0.0 || m.epsilon != 0.0)
    throw ModeViolation("riccati propagation is defined in the deterministic mode");
  const TimeGrid& g = ens.grid;
  const int n = ens.particles();
  const double dt = g.dt();

  const AdjointSweep sweep = adjoint_sweep(m, report.theta_star, ens);

  RiccatiState state;
  state.grid = g;
  state.y.assign(g.nodes(), dmat());
  dmat y = dmat::Zero(n, n);
  for (int i = 0; i < n; ++i) y(i, i) = m.terminal_dd(i, ens.states(g.steps, i)) / n;
  state.y[g.steps] = y;

  for (int k = g.steps - 1; k >= 0; --k) {
    const dvec x = ens.states.row(k + 1).transpose();
    const dvec p = sweep.costates.row(k + 1).transpose();
    const HamiltonianBlocks b = hamiltonian_blocks(m, g.node(k + 1), x, p);
    dmat rhs = b.xx + b.xp * y + y * b.xp.transpose() + y * b.pp * y;
    y += dt * rhs;
    y = 0.5 * (y + y.transpose()).eval();
    const double extreme = y.cwiseAbs().maxCoeff();
    if (!std::isfinite(extreme) || extreme > blowup_threshold) throw RiccatiBlowUp(k, extreme);
    state.y[k] = y;
  }
  return state;
}

}  // namespace mfc
