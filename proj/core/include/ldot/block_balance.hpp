#pragma once

// Gauge rebalancing between weakly coupled blocks of an entropic coupling. Internal to the
// Sinkhorn solver; exposed for testing.

#include <vector>

#include "ldot/matrix.hpp"

namespace ldot::detail {

/// Log-domain state of the scaling iteration: log pi(i,j) = lmu_i + lnu_j + a_i + b_j + kernel(i,j).
struct ScalingState {
  const Matrix& kernel;  ///< -c/eps
  const std::vector<double>& lmu;
  const std::vector<double>& lnu;
  const std::vector<double>& mu;
  const std::vector<double>& nu;
  std::vector<double>& a;
  std::vector<double>& b;

  double log_mass(Eigen::Index i, Eigen::Index j) const {
    return lmu[static_cast<std::size_t>(i)] + lnu[static_cast<std::size_t>(j)] +
           a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(j)] + kernel(i, j);
  }
};

/// Connected components of the bipartite graph of strong cells
/// (mass >= strong_ratio * min(mu_i, nu_j)). Rows are nodes 0..n-1, columns n..n+m-1.
struct BlockStructure {
  std::vector<int> row_block;
  std::vector<int> col_block;
  int count = 0;
};

BlockStructure strong_blocks(const ScalingState& s, double strong_ratio);

/// Shifts a by +t_K on the rows and b by -t_K on the columns of each block K so that the net
/// mass leaving every block matches mu(K) - nu(K). This is exact block-coordinate ascent on the
/// dual objective. Returns max_K |t_K| (0 when nothing was done).
double balance_blocks(ScalingState& s, const BlockStructure& blocks);

/// Solves the grounded weighted-Laplacian system L t = rhs with t[last] = 0 by elimination that
/// never subtracts (diagonals are rebuilt from remaining off-diagonal weights). `weights` is a
/// symmetric nonnegative B x B matrix; its diagonal is ignored.
std::vector<double> solve_grounded_laplacian(Matrix weights, std::vector<double> rhs);

}  // namespace ldot::detail
