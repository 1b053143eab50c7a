#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace mfc {

using dvec = Eigen::VectorXd;
using dmat = Eigen::MatrixXd;
using seed_t = std::uint64_t;

}  // namespace mfc
