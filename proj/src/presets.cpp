#include "mfc/presets.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace mfc {
namespace {

double sq(double x) { return x * x; }

void quadratic_terminal(ModelSpec& m) {
  m.U = sq;
  m.U1 = [](double x) { return 2.0 * x; };
  m.U2 = [](double) { return 2.0; };
  m.growth_U = {2.0, 0.0, 2.0};
}

void quadratic_costs(ModelSpec& m) {
  m.L = sq;
  m.L1 = [](double x) { return 2.0 * x; };
  m.L2 = [](double) { return 2.0; };
  m.growth_L = {2.0, 0.0, 2.0};
  quadratic_terminal(m);
}

void zero_running_cost(ModelSpec& m) {
  m.L = [](double) { return 0.0; };
  m.L1 = [](double) { return 0.0; };
  m.L2 = [](double) { return 0.0; };
  m.growth_L = {0.0, 0.0, 0.0};
}

void squared_error_pair_cost(ModelSpec& m) {
  m.pair_cost = [](double x, double c) { return sq(x - c); };
  m.pair_cost_dx = [](double x, double c) { return 2.0 * (x - c); };
  m.pair_cost_dxx = [](double, double) { return 2.0; };
}

}  // namespace

ModelSpec lq_model() {
  ModelSpec m;
  m.name = "lq";
  m.control_dim = 1;
  m.f = [](double, const dvec& th, double x, const EmpiricalMeasure& mu) { return th[0] + x + mu.mean(); };
  m.f_theta = [](double, const dvec&, double, const EmpiricalMeasure&) { return dvec::Ones(1); };
  m.f_x = [](double, const dvec&, double, const EmpiricalMeasure&) { return 1.0; };
  m.f_mu = [](double, const dvec&, double, const EmpiricalMeasure&, double) { return 1.0; };
  m.f_theta_theta = [](double, const dvec&, double, const EmpiricalMeasure&) { return dmat::Zero(1, 1); };
  m.f_theta_x = [](double, const dvec&, double, const EmpiricalMeasure&) { return dvec::Zero(1); };
  m.f_xx = [](double, const dvec&, double, const EmpiricalMeasure&) { return 0.0; };
  m.f_x_mu = [](double, const dvec&, double, const EmpiricalMeasure&, double) { return 0.0; };
  m.f_theta_mu = [](double, const dvec&, double, const EmpiricalMeasure&, double) { return dvec::Zero(1); };
  quadratic_costs(m);
  m.sigma = 1.0;
  m.lambda = 1.0;
  m.horizon = 1.0;
  return m;
}

ModelSpec batchnorm_model(double eps_bn) {
  ModelSpec m;
  m.name = "batchnorm";
  m.control_dim = 1;
  // z = (x - mean) / s with s = sqrt(m2 + eps_bn); drift = theta * tanh(z).
  // Wasserstein derivatives follow from d mean / d mu (y) = 1, d m2 / d mu (y) = 2y.
  struct Normalized {
    double z, s;
  };
  auto norm = [eps_bn](double x, const EmpiricalMeasure& mu) {
    const double s = std::sqrt(mu.second_moment() + eps_bn);
    return Normalized{(x - mu.mean()) / s, s};
  };
  auto dz_dmu = [](const Normalized& n, double y) { return -1.0 / n.s - n.z * y / (n.s * n.s); };
  auto th1 = [](double z) { return 1.0 - std::tanh(z) * std::tanh(z); };
  auto th2 = [th1](double z) { return -2.0 * std::tanh(z) * th1(z); };

  m.f = [norm](double, const dvec& th, double x, const EmpiricalMeasure& mu) { return th[0] * std::tanh(norm(x, mu).z); };
  m.f_theta = [norm](double, const dvec&, double x, const EmpiricalMeasure& mu) {
    return dvec::Constant(1, std::tanh(norm(x, mu).z));
  };
  m.f_x = [norm, th1](double, const dvec& th, double x, const EmpiricalMeasure& mu) {
    const auto n = norm(x, mu);
    return th[0] * th1(n.z) / n.s;
  };
  m.f_mu = [norm, dz_dmu, th1](double, const dvec& th, double x, const EmpiricalMeasure& mu, double y) {
    const auto n = norm(x, mu);
    return th[0] * th1(n.z) * dz_dmu(n, y);
  };
  m.f_theta_theta = [](double, const dvec&, double, const EmpiricalMeasure&) { return dmat::Zero(1, 1); };
  m.f_theta_x = [norm, th1](double, const dvec&, double x, const EmpiricalMeasure& mu) {
    const auto n = norm(x, mu);
    return dvec::Constant(1, th1(n.z) / n.s);
  };
  m.f_xx = [norm, th2](double, const dvec& th, double x, const EmpiricalMeasure& mu) {
    const auto n = norm(x, mu);
    return th[0] * th2(n.z) / (n.s * n.s);
  };
  m.f_x_mu = [norm, dz_dmu, th1, th2](double, const dvec& th, double x, const EmpiricalMeasure& mu, double y) {
    // d/dmu [ theta th1(z)/s ]: through z and through s
    const auto n = norm(x, mu);
    const double ds = y / n.s;  // d s / d mu (y)
    return th[0] * (th2(n.z) * dz_dmu(n, y) / n.s - th1(n.z) * ds / (n.s * n.s));
  };
  m.f_theta_mu = [norm, dz_dmu, th1](double, const dvec&, double x, const EmpiricalMeasure& mu, double y) {
    const auto n = norm(x, mu);
    return dvec::Constant(1, th1(n.z) * dz_dmu(n, y));
  };
  quadratic_costs(m);
  m.sigma = 0.5;
  m.lambda = 1.0;
  m.horizon = 1.0;
  return m;
}

ModelSpec twolayer_model() {
  ModelSpec m;
  m.name = "twolayer";
  m.control_dim = 3;
  auto act = [](double z) { return std::tanh(z); };
  auto act1 = [](double z) { return 1.0 - std::tanh(z) * std::tanh(z); };
  auto act2 = [act1](double z) { return -2.0 * std::tanh(z) * act1(z); };

  m.f = [act](double, const dvec& th, double x, const EmpiricalMeasure&) { return th[0] * act(th[1] * x + th[2]); };
  m.f_theta = [act, act1](double, const dvec& th, double x, const EmpiricalMeasure&) {
    const double z = th[1] * x + th[2];
    dvec g(3);
    g << act(z), th[0] * x * act1(z), th[0] * act1(z);
    return g;
  };
  m.f_x = [act1](double, const dvec& th, double x, const EmpiricalMeasure&) {
    return th[0] * th[1] * act1(th[1] * x + th[2]);
  };
  m.f_mu = [](double, const dvec&, double, const EmpiricalMeasure&, double) { return 0.0; };
  m.f_theta_theta = [act1, act2](double, const dvec& th, double x, const EmpiricalMeasure&) {
    const double z = th[1] * x + th[2];
    dmat h(3, 3);
    h(0, 0) = 0.0;
    h(0, 1) = h(1, 0) = x * act1(z);
    h(0, 2) = h(2, 0) = act1(z);
    h(1, 1) = th[0] * x * x * act2(z);
    h(1, 2) = h(2, 1) = th[0] * x * act2(z);
    h(2, 2) = th[0] * act2(z);
    return h;
  };
  m.f_theta_x = [act1, act2](double, const dvec& th, double x, const EmpiricalMeasure&) {
    const double z = th[1] * x + th[2];
    dvec g(3);
    g << th[1] * act1(z), th[0] * (act1(z) + th[1] * x * act2(z)), th[0] * th[1] * act2(z);
    return g;
  };
  m.f_xx = [act2](double, const dvec& th, double x, const EmpiricalMeasure&) {
    return th[0] * th[1] * th[1] * act2(th[1] * x + th[2]);
  };
  m.f_x_mu = [](double, const dvec&, double, const EmpiricalMeasure&, double) { return 0.0; };
  m.f_theta_mu = [](double, const dvec&, double, const EmpiricalMeasure&, double) { return dvec::Zero(3); };

  zero_running_cost(m);
  // plain U = x^2 when no dataset is attached; the supervised module swaps in
  // the pair cost Phi(g(x), label) with frozen labels
  quadratic_terminal(m);
  squared_error_pair_cost(m);

  m.sigma = 0.0;
  m.lambda = 0.5;
  m.horizon = 0.5;
  return m;
}

ModelSpec basis_model(std::vector<BasisFunction> basis) {
  if (basis.empty()) throw std::invalid_argument("basis_model: at least one basis function");
  ModelSpec m;
  m.name = "basis";
  const int d = static_cast<int>(basis.size());
  m.control_dim = d;
  auto bs = std::make_shared<std::vector<BasisFunction>>(std::move(basis));
  m.f = [bs](double, const dvec& th, double x, const EmpiricalMeasure&) {
    double v = 0.0;
    for (int j = 0; j < th.size(); ++j) v += th[j] * (*bs)[j].value(x);
    return v;
  };
  m.f_theta = [bs, d](double, const dvec&, double x, const EmpiricalMeasure&) {
    dvec g(d);
    for (int j = 0; j < d; ++j) g[j] = (*bs)[j].value(x);
    return g;
  };
  m.f_x = [bs](double, const dvec& th, double x, const EmpiricalMeasure&) {
    double v = 0.0;
    for (int j = 0; j < th.size(); ++j) v += th[j] * (*bs)[j].d1(x);
    return v;
  };
  m.f_mu = [](double, const dvec&, double, const EmpiricalMeasure&, double) { return 0.0; };
  m.f_theta_theta = [d](double, const dvec&, double, const EmpiricalMeasure&) { return dmat::Zero(d, d); };
  m.f_theta_x = [bs, d](double, const dvec&, double x, const EmpiricalMeasure&) {
    dvec g(d);
    for (int j = 0; j < d; ++j) g[j] = (*bs)[j].d1(x);
    return g;
  };
  m.f_xx = [bs](double, const dvec& th, double x, const EmpiricalMeasure&) {
    double v = 0.0;
    for (int j = 0; j < th.size(); ++j) v += th[j] * (*bs)[j].d2(x);
    return v;
  };
  m.f_x_mu = [](double, const dvec&, double, const EmpiricalMeasure&, double) { return 0.0; };
  m.f_theta_mu = [d](double, const dvec&, double, const EmpiricalMeasure&, double) { return dvec::Zero(d); };
  zero_running_cost(m);
  quadratic_terminal(m);
  squared_error_pair_cost(m);
  m.sigma = 0.0;
  m.lambda = 0.5;
  m.horizon = 0.5;
  return m;
}

ModelSpec preset(const std::string& name) {
  if (name == "lq") return lq_model();
  if (name == "batchnorm") return batchnorm_model();
  if (name == "twolayer") return twolayer_model();
  throw std::invalid_argument("unknown model preset: " + name);
}

}  // namespace mfc
