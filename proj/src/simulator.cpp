#include "mfc/simulator.hpp"

#include <cmath>
#include <stdexcept>

namespace mfc {
namespace {

void check_setup(const ModelSpec& m, const ControlPath& theta, const dvec& x0, const NoiseBundle& noise) {
  if (!same_grid(theta.grid, noise.grid)) throw std::invalid_argument("simulate: control and noise grids differ");
  if (x0.size() == 0) throw std::invalid_argument("simulate: empty initial sample");
  if (m.epsilon > 0.0 && noise.has_idiosyncratic() && noise.idio_particles() != x0.size())
    throw std::invalid_argument("simulate: idiosyncratic noise particle count mismatch");
  if (m.has_pair_cost() && m.frozen.size() != x0.size())
    throw std::invalid_argument("simulate: frozen data size must match particle count");
}

}  // namespace

ParticleEnsemble simulate(const ModelSpec& m, const ControlPath& theta, const dvec& x0, const NoiseBundle& noise) {
  check_setup(m, theta, x0, noise);
  const TimeGrid& g = theta.grid;
  const int n = static_cast<int>(x0.size());
  const double dt = g.dt();
  const bool idio = m.epsilon > 0.0 && noise.has_idiosyncratic();

  ParticleEnsemble ens;
  ens.grid = g;
  ens.seed = noise.seed;
  ens.states.resize(g.nodes(), n);
  ens.states.row(0) = x0.transpose();

  dvec row = x0;
  for (int k = 0; k < g.steps; ++k) {
    const EmpiricalMeasure mu{row};
    const double t = g.node(k);
    const dvec th = theta.at(k);
    const double dw0 = m.sigma * noise.common[k];
    for (int i = 0; i < n; ++i) {
      double x = row[i] + m.f(t, th, row[i], mu) * dt + dw0;
      if (idio) x += m.epsilon * noise.idiosyncratic(k, i);
      if (!std::isfinite(x) || std::abs(x) > kBlowUpThreshold) throw IntegrationDiverged(k, x);
      row[i] = x;
    }
    ens.states.row(k + 1) = row.transpose();
  }
  return ens;
}

double pathwise_cost(const ModelSpec& m, const ControlPath& theta, const ParticleEnsemble& ens) {
  const TimeGrid& g = ens.grid;
  const int n = ens.particles();
  const double dt = g.dt();
  double run = 0.0, reg = 0.0;
  for (int k = 0; k < g.steps; ++k) {
    double lsum = 0.0;
    for (int i = 0; i < n; ++i) lsum += m.L(ens.states(k, i));
    run += lsum / n * dt;
    const dvec dth = theta.at(k) - m.reference_at(g.node(k));
    reg += 0.5 * m.lambda * dth.squaredNorm() * dt;
  }
  double term = 0.0;
  for (int i = 0; i < n; ++i) term += m.terminal(i, ens.states(g.steps, i));
  return run + term / n + reg;
}

double objective(const ModelSpec& m, const ControlPath& theta, const dvec& x0, const std::vector<NoiseBundle>& batch) {
  if (batch.empty()) throw std::invalid_argument("objective: empty noise batch");
  double acc = 0.0;
  for (const auto& b : batch) acc += pathwise_cost(m, theta, simulate(m, theta, x0, b));
  return acc / batch.size();
}

MomentAudit moment_audit(const std::vector<ParticleEnsemble>& batch, const ControlPath& theta, const ModelSpec& m,
                         double c1) {
  if (batch.empty()) throw std::invalid_argument("moment_audit: empty batch");
  const TimeGrid& g = batch.front().grid;
  const int n = batch.front().particles();
  const dvec x0 = batch.front().states.row(0).transpose();
  const double dt = g.dt();

  MomentAudit audit;
  audit.c1 = c1;
  audit.max_moment = dvec::Zero(n);
  for (int k = 0; k <= g.steps; ++k) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (const auto& e : batch) s += e.states(k, i) * e.states(k, i);
      audit.max_moment[i] = std::max(audit.max_moment[i], s / batch.size());
    }
  }

  // int_0^T |f(s, theta_s, 0, delta_0)|^2 ds, left-endpoint quadrature
  const EmpiricalMeasure delta0{dvec::Zero(1)};
  double fint = 0.0;
  for (int k = 0; k < g.steps; ++k) {
    const double fv = m.f(g.node(k), theta.at(k), 0.0, delta0);
    fint += fv * fv * dt;
  }

  const double mean_sq = x0.squaredNorm() / n;
  audit.bound.resize(n);
  for (int i = 0; i < n; ++i) {
    const double base = 1.0 + x0[i] * x0[i] + fint + mean_sq;
    audit.bound[i] = c1 * base;
    audit.max_ratio = std::max(audit.max_ratio, audit.max_moment[i] / base);
    if (audit.max_moment[i] > audit.bound[i]) audit.pass = false;
  }
  return audit;
}

}  // namespace mfc
