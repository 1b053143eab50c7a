#include "mfc/model.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace mfc {
namespace {

double rel_gap(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - b) / scale;
}

struct Probe {
  double t;
  dvec theta;
  double x;
  dvec atoms;
};

Probe draw_probe(std::mt19937_64& rng, const ModelSpec& m) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_int_distribution<int> nn(1, 6);
  Probe p;
  p.t = 0.5 * (u(rng) + 1.5) * m.horizon / 1.5;
  p.theta = dvec::NullaryExpr(m.control_dim, [&](Eigen::Index) { return u(rng); });
  if (m.control_box) p.theta = p.theta.cwiseMax(-*m.control_box).cwiseMin(*m.control_box);
  p.x = u(rng);
  p.atoms = dvec::NullaryExpr(nn(rng), [&](Eigen::Index) { return u(rng); });
  return p;
}

}  // namespace

ValidationReport validate_model(const ModelSpec& m, const ValidationOptions& opt) {
  ValidationReport rep;
  auto fail = [&](const std::string& msg) {
    rep.ok = false;
    rep.issues.push_back(msg);
  };

  if (!(m.lambda > 0.0)) fail("lambda must be > 0");
  if (!(m.horizon > 0.0)) fail("horizon must be > 0");
  if (m.epsilon < 0.0) fail("epsilon must be >= 0");
  if (m.control_dim < 1) fail("control_dim must be >= 1");
  if (!m.f || !m.f_theta || !m.f_x || !m.f_mu) fail("drift and first derivatives are required");
  if (!m.L || !m.L1 || !m.L2 || !m.U || !m.U1 || !m.U2) fail("cost callables with derivatives are required");
  if (m.has_pair_cost() && (!m.pair_cost || !m.pair_cost_dx || !m.pair_cost_dxx))
    fail("frozen data set but pair cost callables missing");
  if (!rep.ok) return rep;

  // cost positivity and growth constants on a log-spaced grid, both signs
  for (int s = 0; s < opt.growth_samples; ++s) {
    const double r = std::pow(opt.growth_x_max, s / double(opt.growth_samples - 1)) - 1.0 + 1e-3;
    for (double x : {r, -r}) {
      struct Item {
        const char* tag;
        const ModelSpec::Scal *phi, *d1, *d2;
        const GrowthBound* g;
      };
      const Item items[] = {{"L", &m.L, &m.L1, &m.L2, &m.growth_L}, {"U", &m.U, &m.U1, &m.U2, &m.growth_U}};
      for (const auto& it : items) {
        const double v = (*it.phi)(x), d1 = (*it.d1)(x), d2 = (*it.d2)(x);
        if (v < 0.0) {
          std::ostringstream os;
          os << it.tag << "(" << x << ") = " << v << " < 0";
          fail(os.str());
        }
        if (std::abs(d1) > it.g->c11 * std::abs(x) + it.g->c10 + 1e-9) {
          std::ostringstream os;
          os << "|" << it.tag << "'(" << x << ")| exceeds stored growth bound";
          fail(os.str());
        }
        if (std::abs(d2) > it.g->c20 + 1e-9) {
          std::ostringstream os;
          os << "|" << it.tag << "''(" << x << ")| exceeds stored bound";
          fail(os.str());
        }
      }
      if (!rep.ok && rep.issues.size() > 8) return rep;
    }
  }

  // finite-difference cross-check of the supplied drift derivatives
  std::mt19937_64 rng(opt.seed);
  const double h = opt.fd_step;
  for (int probe = 0; probe < opt.derivative_probes; ++probe) {
    const Probe p = draw_probe(rng, m);
    const EmpiricalMeasure mu(p.atoms);
    auto fv = [&](const dvec& th, double x) { return m.f(p.t, th, x, mu); };

    // f_theta and f_theta_theta
    const dvec g = m.f_theta(p.t, p.theta, p.x, mu);
    for (int k = 0; k < m.control_dim; ++k) {
      dvec tp = p.theta, tm = p.theta;
      tp[k] += h;
      tm[k] -= h;
      if (rel_gap(g[k], (fv(tp, p.x) - fv(tm, p.x)) / (2 * h)) > opt.fd_rel_tol) fail("f_theta mismatch vs finite differences");
      if (m.f_theta_theta) {
        const dvec gp = m.f_theta(p.t, tp, p.x, mu), gm = m.f_theta(p.t, tm, p.x, mu);
        const dvec col = m.f_theta_theta(p.t, p.theta, p.x, mu).col(k);
        for (int r = 0; r < m.control_dim; ++r)
          if (rel_gap(col[r], (gp[r] - gm[r]) / (2 * h)) > opt.fd_rel_tol) fail("f_theta_theta mismatch");
      }
      if (m.f_theta_x) {
        const double fxp = m.f_x(p.t, tp, p.x, mu), fxm = m.f_x(p.t, tm, p.x, mu);
        if (rel_gap(m.f_theta_x(p.t, p.theta, p.x, mu)[k], (fxp - fxm) / (2 * h)) > opt.fd_rel_tol)
          fail("f_theta_x mismatch");
      }
    }

    // f_x and f_xx
    if (rel_gap(m.f_x(p.t, p.theta, p.x, mu), (fv(p.theta, p.x + h) - fv(p.theta, p.x - h)) / (2 * h)) > opt.fd_rel_tol)
      fail("f_x mismatch vs finite differences");
    if (m.f_xx) {
      const double d2 = (m.f_x(p.t, p.theta, p.x + h, mu) - m.f_x(p.t, p.theta, p.x - h, mu)) / (2 * h);
      if (rel_gap(m.f_xx(p.t, p.theta, p.x, mu), d2) > opt.fd_rel_tol) fail("f_xx mismatch");
    }

    // Wasserstein derivative: moving atom j by h changes f by (1/N) f_mu(.., y_j) h
    const int j = probe % p.atoms.size();
    dvec ap = p.atoms, am = p.atoms;
    ap[j] += h;
    am[j] -= h;
    const double dir = (m.f(p.t, p.theta, p.x, EmpiricalMeasure(ap)) - m.f(p.t, p.theta, p.x, EmpiricalMeasure(am))) / (2 * h);
    const double predicted = m.f_mu(p.t, p.theta, p.x, mu, p.atoms[j]) / p.atoms.size();
    if (rel_gap(dir, predicted) > opt.fd_rel_tol) fail("f_mu mismatch vs atom perturbation");
    if (m.f_x_mu) {
      const double dfx = (m.f_x(p.t, p.theta, p.x, EmpiricalMeasure(ap)) - m.f_x(p.t, p.theta, p.x, EmpiricalMeasure(am))) / (2 * h);
      if (rel_gap(dfx, m.f_x_mu(p.t, p.theta, p.x, mu, p.atoms[j]) / p.atoms.size()) > opt.fd_rel_tol)
        fail("f_x_mu mismatch vs atom perturbation");
    }
    if (m.f_theta_mu) {
      const dvec dft = (m.f_theta(p.t, p.theta, p.x, EmpiricalMeasure(ap)) - m.f_theta(p.t, p.theta, p.x, EmpiricalMeasure(am))) / (2 * h);
      const dvec pred = m.f_theta_mu(p.t, p.theta, p.x, mu, p.atoms[j]) / p.atoms.size();
      for (int r = 0; r < m.control_dim; ++r)
        if (rel_gap(dft[r], pred[r]) > opt.fd_rel_tol) fail("f_theta_mu mismatch vs atom perturbation");
    }
    if (!rep.ok && rep.issues.size() > 16) return rep;
  }
  return rep;
}

}  // namespace mfc
