#include "mfc/hamiltonian.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>

namespace mfc {

double hamiltonian_value(const ModelSpec& m, double t, const dvec& x, const dvec& p, const dvec& theta) {
  const int n = static_cast<int>(x.size());
  const EmpiricalMeasure mu{x};
  double drift_dot = 0.0, lsum = 0.0;
  for (int i = 0; i < n; ++i) {
    drift_dot += m.f(t, theta, x[i], mu) * p[i];
    lsum += m.L(x[i]);
  }
  return 0.5 * m.lambda * theta.squaredNorm() + drift_dot + lsum / n;
}

namespace {

// gradient of H in theta: lambda theta + sum_i f_theta(t,theta,x_i,mu) p_i
dvec theta_gradient(const ModelSpec& m, double t, const dvec& x, const dvec& p, const EmpiricalMeasure& mu,
                    const dvec& theta) {
  dvec g = m.lambda * theta;
  for (int i = 0; i < x.size(); ++i) g += m.f_theta(t, theta, x[i], mu) * p[i];
  return g;
}

dmat theta_hessian(const ModelSpec& m, double t, const dvec& x, const dvec& p, const EmpiricalMeasure& mu,
                   const dvec& theta) {
  dmat h = m.lambda * dmat::Identity(m.control_dim, m.control_dim);
  for (int i = 0; i < x.size(); ++i) h += m.f_theta_theta(t, theta, x[i], mu) * p[i];
  return h;
}

}  // namespace

dvec feedback_minimizer(const ModelSpec& m, double t, const dvec& x, const dvec& p, const MinimizerOptions& opt) {
  const EmpiricalMeasure mu{x};
  dvec theta = m.clamp_control(dvec::Zero(m.control_dim));
  double value = hamiltonian_value(m, t, x, p, theta);

  for (int iter = 0; iter < opt.max_iter; ++iter) {
    const dvec grad = theta_gradient(m, t, x, p, mu, theta);

    // stationarity residual; box-clipped coordinates only count when the
    // gradient pushes back into the interior
    double residual = 0.0;
    for (int k = 0; k < theta.size(); ++k) {
      const bool at_hi = m.control_box && theta[k] >= *m.control_box && grad[k] < 0.0;
      const bool at_lo = m.control_box && theta[k] <= -*m.control_box && grad[k] > 0.0;
      if (!(at_hi || at_lo)) residual = std::max(residual, std::abs(grad[k]));
    }
    if (residual < opt.residual_tol) return theta;

    dmat hess = theta_hessian(m, t, x, p, mu, theta);
    const Eigen::SelfAdjointEigenSolver<dmat> es(hess);
    const double ev = es.eigenvalues().minCoeff();
    if (ev < opt.hessian_floor) throw NonConvexHamiltonian(ev);

    const dvec step = hess.ldlt().solve(grad);
    double s = 1.0;
    bool accepted = false;
    for (int half = 0; half <= opt.max_halvings; ++half) {
      const dvec cand = m.clamp_control(theta - s * step);
      const double v = hamiltonian_value(m, t, x, p, cand);
      if (v <= value + 1e-15 * (1.0 + std::abs(value))) {
        theta = cand;
        value = v;
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) throw MinimizerNoConvergence(residual);
  }
  const dvec grad = theta_gradient(m, t, x, p, mu, theta);
  if (grad.cwiseAbs().maxCoeff() >= opt.residual_tol) throw MinimizerNoConvergence(grad.cwiseAbs().maxCoeff());
  return theta;
}

HypothesisAudit audit_hypotheses(const ModelSpec& m, int probe_budget, seed_t seed, const AuditOptions& opt) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-opt.x_max, opt.x_max);
  std::uniform_real_distribution<double> uth(-opt.theta_range, opt.theta_range);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> usym(-1.0, 1.0);

  HypothesisAudit audit;
  audit.seed = seed;
  audit.min_hessian_eig = std::numeric_limits<double>::infinity();

  const double cg1 = opt.tilde_c2 * (m.growth_L.c11 + m.growth_U.c11);
  const double cg0 = opt.tilde_c2 * (m.growth_L.c10 + m.growth_U.c10);
  int r1_samples = 0;

  for (int probe = 0; probe < probe_budget; ++probe) {
    const int n = opt.particle_counts[probe % opt.particle_counts.size()];
    dvec x = dvec::NullaryExpr(n, [&](Eigen::Index) { return ux(rng); });
    const EmpiricalMeasure mu{x};
    const double mean_sq = x.squaredNorm() / n;

    // costates inside the envelope of the admissible region A_N
    dvec p(n);
    for (int i = 0; i < n; ++i) {
      const double cap = cg1 / n * std::sqrt(1.0 + x[i] * x[i] + mean_sq) + cg0 / n;
      p[i] = cap * usym(rng);
    }
    dvec theta(m.control_dim);
    for (int k = 0; k < theta.size(); ++k) theta[k] = uth(rng);
    theta = m.clamp_control(theta);
    const double t = u01(rng) * m.horizon;

    for (int i = 0; i < n; ++i) {
      const dmat ftt = m.f_theta_theta(t, theta, x[i], mu) * p[i];
      const double op_norm = ftt.cwiseAbs().rowwise().sum().maxCoeff();
      audit.lambda0 = std::max(audit.lambda0, n * op_norm);

      const double phi_xth = m.f_theta_x(t, theta, x[i], mu).cwiseAbs().maxCoeff();
      const double phi_xx = std::abs(m.f_xx(t, theta, x[i], mu));
      const double psi_xmu = std::abs(m.f_x_mu(t, theta, x[i], mu, x[i]));
      const double psi_thmu = m.f_theta_mu(t, theta, x[i], mu, x[i]).cwiseAbs().maxCoeff();
      for (double phi : {phi_xth, phi_xx})
        for (double psi : {psi_xmu, psi_thmu}) audit.cq = std::max(audit.cq, (phi + psi) * n * std::abs(p[i]));

      audit.f_theta_sup = std::max(audit.f_theta_sup, m.f_theta(t, theta, x[i], mu).cwiseAbs().maxCoeff());
    }

    // Hypothesis (R1): x-convexity of the minimized Hamiltonian, finite
    // differences of the value map x -> min_theta H(t,x,p,theta)
    if (r1_samples < opt.r1_budget && n >= 1 && audit.lambda0 < m.lambda) {
      ++r1_samples;
      const double h = 1e-4;
      auto ham_min = [&](const dvec& xx) {
        const dvec ts = feedback_minimizer(m, t, xx, p);
        return hamiltonian_value(m, t, xx, p, ts);
      };
      try {
        dmat hess(n, n);
        const double base = ham_min(x);
        for (int i = 0; i < n; ++i) {
          for (int j = i; j < n; ++j) {
            double v;
            if (i == j) {
              dvec xp = x, xm = x;
              xp[i] += h;
              xm[i] -= h;
              v = (ham_min(xp) - 2.0 * base + ham_min(xm)) / (h * h);
            } else {
              dvec xpp = x, xpm = x, xmp = x, xmm = x;
              xpp[i] += h; xpp[j] += h;
              xpm[i] += h; xpm[j] -= h;
              xmp[i] -= h; xmp[j] += h;
              xmm[i] -= h; xmm[j] -= h;
              v = (ham_min(xpp) - ham_min(xpm) - ham_min(xmp) + ham_min(xmm)) / (4.0 * h * h);
            }
            hess(i, j) = hess(j, i) = v;
          }
        }
        const Eigen::SelfAdjointEigenSolver<dmat> es(hess);
        audit.min_hessian_eig = std::min(audit.min_hessian_eig, es.eigenvalues().minCoeff());
        if (es.eigenvalues().minCoeff() < -opt.r1_tol) audit.r1_convex = false;
      } catch (const std::runtime_error&) {
        audit.r1_convex = false;  // minimizer failure inside the probe region
      }
    }
    ++audit.probes;
  }

  audit.margin = m.lambda - audit.lambda0;
  audit.pass = audit.margin > 0.0;
  if (!std::isfinite(audit.min_hessian_eig)) audit.min_hessian_eig = 0.0;
  return audit;
}

}  // namespace mfc
