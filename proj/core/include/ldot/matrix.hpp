#pragma once

#include <Eigen/Core>

namespace ldot {

/// Dense row-major storage used for couplings, cost matrices and log-densities.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

}  // namespace ldot
