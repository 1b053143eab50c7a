#include "mfc/hjb_grid.hpp"

#include "mfc/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

namespace mfc {
namespace {

struct Interp {
  int idx;
  double w;  // value = (1-w) node[idx] + w node[idx+1]
};

Interp locate(const dvec& nodes, double x) {
  const double dx = nodes[1] - nodes[0];
  int i = static_cast<int>(std::floor((x - nodes[0]) / dx));
  i = std::clamp(i, 0, static_cast<int>(nodes.size()) - 2);
  const double w = std::clamp((x - nodes[i]) / dx, 0.0, 1.0);
  return {i, w};
}

}  // namespace

double GridValueFunction::value_at(double t, double x) const {
  const Interp ix = locate(x_nodes, x);
  const double dt = t_grid.dt();
  int k = static_cast<int>(std::floor((t - t_grid.t0) / dt));
  k = std::clamp(k, 0, t_grid.steps - 1);
  const double wt = std::clamp((t - t_grid.node(k)) / dt, 0.0, 1.0);
  auto slice = [&](int kk) { return (1.0 - ix.w) * values(kk, ix.idx) + ix.w * values(kk, ix.idx + 1); };
  return (1.0 - wt) * slice(k) + wt * slice(k + 1);
}

double GridValueFunction::derivative_at(double t, double x) const {
  const int nx = static_cast<int>(x_nodes.size());
  const Interp ix = locate(x_nodes, x);
  const double dt = t_grid.dt();
  int k = static_cast<int>(std::floor((t - t_grid.t0) / dt));
  k = std::clamp(k, 0, t_grid.steps - 1);
  const double wt = std::clamp((t - t_grid.node(k)) / dt, 0.0, 1.0);
  auto slope = [&](int kk, int j) {
    if (j == 0) return (values(kk, 1) - values(kk, 0)) / dx();
    if (j == nx - 1) return (values(kk, nx - 1) - values(kk, nx - 2)) / dx();
    return (values(kk, j + 1) - values(kk, j - 1)) / (2.0 * dx());
  };
  auto at = [&](int kk) { return (1.0 - ix.w) * slope(kk, ix.idx) + ix.w * slope(kk, ix.idx + 1); };
  return (1.0 - wt) * at(k) + wt * at(k + 1);
}

GridValueFunction hjb_solve_1d(const ModelSpec& m, const HjbConfig& cfg, double eps_grid) {
  if (cfg.nx < 5) throw std::invalid_argument("hjb: at least 5 space nodes required");
  const int nx = cfg.nx;
  const double dx = (cfg.x_hi - cfg.x_lo) / (nx - 1);
  const double diffusion = 0.5 * (m.sigma * m.sigma + eps_grid * eps_grid);

  // pre-estimate of the drift magnitude for the CFL-derived step count:
  // |f| at theta = 0 plus the feedback range lambda^-1 |f_theta| |DV| with the
  // slope bounded through the growth constants of the data
  double f0_max = 0.0, ftheta_max = 0.0;
  double du_max = 0.0;
  for (int j = 0; j < nx; ++j) {
    const double x = cfg.x_lo + j * dx;
    const EmpiricalMeasure mu{dvec::Constant(1, x)};
    f0_max = std::max(f0_max, std::abs(m.f(0.0, dvec::Zero(m.control_dim), x, mu)));
    ftheta_max = std::max(ftheta_max, m.f_theta(0.0, dvec::Zero(m.control_dim), x, mu).cwiseAbs().maxCoeff());
    du_max = std::max(du_max, std::abs(m.U1(x)));
  }
  const double xr = std::max(std::abs(cfg.x_lo), std::abs(cfg.x_hi));
  const double slope_cap = (m.growth_U.c11 + m.growth_L.c11 * m.horizon) * 2.5 * xr + m.growth_U.c10 +
                           m.growth_L.c10 * m.horizon + du_max;
  const double fmax_est = f0_max + ftheta_max * ftheta_max * slope_cap / m.lambda + 1.0;

  int nt = cfg.nt;
  if (nt == 0) {
    double dt_cap = cfg.cfl_safety * dx / fmax_est;
    if (diffusion > 0.0) dt_cap = std::min(dt_cap, cfg.cfl_safety * dx * dx / (2.0 * diffusion));
    nt = std::max(1, static_cast<int>(std::ceil(m.horizon / dt_cap)));
  }

  GridValueFunction vf;
  vf.x_nodes = dvec::LinSpaced(nx, cfg.x_lo, cfg.x_hi);
  vf.t_grid = TimeGrid(0.0, m.horizon, nt);
  vf.viscosity = eps_grid;
  vf.values.resize(nt + 1, nx);
  vf.theta.assign(m.control_dim, dmat::Zero(nt + 1, nx));
  const double dt = vf.t_grid.dt();

  // CFL verified before stepping
  if (diffusion > 0.0 && dt > dx * dx / (2.0 * diffusion) + 1e-15)
    throw CflViolation("hjb: dt exceeds the diffusion CFL bound dx^2 / (sigma^2 + eps^2)");
  if (dt > dx / fmax_est + 1e-15) throw CflViolation("hjb: dt exceeds the convection CFL bound dx / max|f|");

  for (int j = 0; j < nx; ++j) vf.values(nt, j) = m.U(vf.x_nodes[j]);
  // terminal feedback from the terminal slope (reported, not used in stepping)
  for (int j = 0; j < nx; ++j) {
    const double x = vf.x_nodes[j];
    const EmpiricalMeasure mu{dvec::Constant(1, x)};
    const dvec p = dvec::Constant(1, m.U1(x));
    const dvec ts = feedback_minimizer(m, m.horizon, dvec::Constant(1, x), p);
    for (int c = 0; c < m.control_dim; ++c) vf.theta[c](nt, j) = ts[c];
  }

  dvec cur(nx), next = vf.values.row(nt).transpose();
  for (int k = nt - 1; k >= 0; --k) {
    const double t = vf.t_grid.node(k);
    for (int j = 0; j < nx; ++j) {
      // linear extrapolation ghost values
      const double vm = (j > 0) ? next[j - 1] : 2.0 * next[0] - next[1];
      const double vp = (j < nx - 1) ? next[j + 1] : 2.0 * next[nx - 1] - next[nx - 2];
      const double x = vf.x_nodes[j];
      const double d2 = (vp - 2.0 * next[j] + vm) / (dx * dx);
      const double dv_c = (vp - vm) / (2.0 * dx);

      const EmpiricalMeasure mu{dvec::Constant(1, x)};
      const dvec ts = feedback_minimizer(m, t, dvec::Constant(1, x), dvec::Constant(1, dv_c));
      const double a = m.f(t, ts, x, mu);
      if (std::abs(a) * dt > dx + 1e-12) throw CflViolation("hjb: realized drift violates the CFL bound");
      const double dv_up = (a > 0.0) ? (vp - next[j]) / dx : (next[j] - vm) / dx;
      const double ham = 0.5 * m.lambda * ts.squaredNorm() + a * dv_up + m.L(x);
      cur[j] = next[j] + dt * (diffusion * d2 + ham);
      for (int c = 0; c < m.control_dim; ++c) vf.theta[c](k, j) = ts[c];
    }
    vf.values.row(k) = cur.transpose();
    next = cur;
  }

  // width of the band influenced by the boundary extrapolation: information
  // travels one cell per step near the boundary
  vf.boundary_influence = std::min(fmax_est * m.horizon, (cfg.x_hi - cfg.x_lo) / 2.0);
  return vf;
}

GridValueFunction hjb_solve_ladder(const ModelSpec& m, const HjbConfig& cfg) {
  if (cfg.eps_ladder.size() < 2) throw std::invalid_argument("hjb ladder: at least two viscosity rungs");
  std::vector<GridValueFunction> rungs;
  rungs.reserve(cfg.eps_ladder.size());
  for (double e : cfg.eps_ladder) rungs.push_back(hjb_solve_1d(m, cfg, e));

  // Richardson extrapolation in the viscosity, V^eps ~ V + C eps^2, using the
  // two finest rungs; rungs carry their own (CFL-matched) time grids, so the
  // combination is done on the coarser of the two time grids by interpolation
  const GridValueFunction& a = rungs[rungs.size() - 2];
  const GridValueFunction& b = rungs[rungs.size() - 1];
  const double r = a.viscosity / b.viscosity;
  const double r2 = r * r;

  GridValueFunction out = b;
  out.viscosity = 0.0;
  for (int k = 0; k <= out.t_grid.steps; ++k) {
    const double t = out.t_grid.node(k);
    for (int j = 0; j < out.x_nodes.size(); ++j)
      out.values(k, j) = (r2 * b.values(k, j) - a.value_at(t, out.x_nodes[j])) / (r2 - 1.0);
  }
  return out;
}

Rollout feedback_rollout(const ModelSpec& m, const GridValueFunction& vf, double x0) {
  if (x0 <= vf.x_lo() || x0 >= vf.x_hi()) throw GridExit(x0, vf.t_grid.t0);
  const TimeGrid& g = vf.t_grid;
  const double dt = g.dt();

  Rollout roll;
  roll.trajectory.resize(g.nodes());
  roll.control.resize(g.nodes(), m.control_dim);
  double x = x0;
  roll.trajectory[0] = x;
  double run = 0.0;
  for (int k = 0; k < g.steps; ++k) {
    const double t = g.node(k);
    const double dv = vf.derivative_at(t, x);
    const EmpiricalMeasure mu{dvec::Constant(1, x)};
    const dvec ts = feedback_minimizer(m, t, dvec::Constant(1, x), dvec::Constant(1, dv));
    roll.control.row(k) = ts.transpose();
    run += (m.L(x) + 0.5 * m.lambda * ts.squaredNorm()) * dt;
    x += m.f(t, ts, x, mu) * dt;
    if (x <= vf.x_lo() || x >= vf.x_hi()) throw GridExit(x, t + dt);
    roll.trajectory[k + 1] = x;
  }
  roll.control.row(g.steps) = roll.control.row(g.steps - 1);
  roll.cost = run + m.U(x);
  return roll;
}

}  // namespace mfc
