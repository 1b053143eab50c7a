#pragma once

#include "mfc/model.hpp"

namespace mfc {

// f = theta + x + mean(mu), L = U = x^2, sigma = lambda = 1
ModelSpec lq_model();

// f = theta * tanh((x - mean(mu)) / sqrt(m2(mu) + eps_bn)), L = U = x^2
ModelSpec batchnorm_model(double eps_bn = 1.0);

// d = 3 neural-flow drift theta_1 * act(theta_2 x + theta_3); act = tanh,
// squared-error pair cost against frozen labels, L = 0
ModelSpec twolayer_model();

// drift sum_j theta_j * basis_j(x); basis functions with first and second
// derivatives supplied by the caller
struct BasisFunction {
  std::function<double(double)> value, d1, d2;
};
ModelSpec basis_model(std::vector<BasisFunction> basis);

// presets addressable by name in configs: "lq" | "batchnorm" | "twolayer"
ModelSpec preset(const std::string& name);

}  // namespace mfc
