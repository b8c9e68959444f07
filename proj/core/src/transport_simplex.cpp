#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ldot/errors.hpp"
#include "ldot/exact.hpp"

namespace ldot {

namespace {

struct Cell {
  std::size_t i;
  std::size_t j;
  double flow;
};

class TransportSimplex {
 public:
  TransportSimplex(const std::vector<double>& supply, const std::vector<double>& demand,
                   const Matrix& cost)
      : n_(supply.size()), m_(demand.size()), cost_(cost) {
    north_west_corner(supply, demand);
    tol_ = 1e-11 * std::max(1.0, cost.cwiseAbs().maxCoeff());
  }

  Matrix solve() {
    // Bland's rule cannot cycle; the cap only guards against a logic error.
    const long max_pivots = 50L * static_cast<long>((n_ + m_) * (n_ + m_)) + 1000;
    for (long pivot = 0;; ++pivot) {
      if (pivot > max_pivots) throw InvariantViolation("solve_exact: pivot limit reached");
      compute_potentials();
      std::size_t ei = 0, ej = 0;
      if (!find_entering(ei, ej)) break;
      pivot_on(ei, ej);
    }
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(m_));
    for (const Cell& c : basis_)
      out(static_cast<Eigen::Index>(c.i), static_cast<Eigen::Index>(c.j)) = std::max(0.0, c.flow);
    return out;
  }

 private:
  void north_west_corner(std::vector<double> s, std::vector<double> d) {
    std::size_t i = 0, j = 0;
    while (true) {
      const double x = std::min(s[i], d[j]);
      basis_.push_back({i, j, x});
      s[i] -= x;
      d[j] -= x;
      if (i + 1 == n_ && j + 1 == m_) break;
      if (j + 1 == m_ || (i + 1 < n_ && s[i] <= d[j]))
        ++i;
      else
        ++j;
    }
  }

  // Tree nodes: rows 0..n-1, columns n..n+m-1; one edge per basic cell.
  void build_adjacency() {
    adj_.assign(n_ + m_, {});
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      adj_[basis_[k].i].push_back(k);
      adj_[n_ + basis_[k].j].push_back(k);
    }
  }

  void compute_potentials() {
    build_adjacency();
    const double unset = std::numeric_limits<double>::quiet_NaN();
    pot_.assign(n_ + m_, unset);
    std::vector<std::size_t> stack{0};
    pot_[0] = 0.0;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t k : adj_[node]) {
        const Cell& c = basis_[k];
        const std::size_t other = node < n_ ? n_ + c.j : c.i;
        if (!std::isnan(pot_[other])) continue;
        const double cij = cost_(static_cast<Eigen::Index>(c.i), static_cast<Eigen::Index>(c.j));
        // u_i + v_j = c_ij on basic cells.
        pot_[other] = cij - pot_[node];
        stack.push_back(other);
      }
    }
  }

  bool find_entering(std::size_t& ei, std::size_t& ej) const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j) {
        const double r =
            cost_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - pot_[i] - pot_[n_ + j];
        if (r < -tol_) {
          ei = i;
          ej = j;
          return true;
        }
      }
    return false;
  }

  void pivot_on(std::size_t ei, std::size_t ej) {
    // Path in the basis tree from row ei to column ej.
    const std::size_t src = ei, dst = n_ + ej;
    std::vector<std::size_t> via(n_ + m_, basis_.size());
    std::vector<char> seen(n_ + m_, 0);
    std::vector<std::size_t> queue{src};
    seen[src] = 1;
    for (std::size_t q = 0; q < queue.size() && !seen[dst]; ++q) {
      const std::size_t node = queue[q];
      for (std::size_t k : adj_[node]) {
        const std::size_t other = node < n_ ? n_ + basis_[k].j : basis_[k].i;
        if (seen[other]) continue;
        seen[other] = 1;
        via[other] = k;
        queue.push_back(other);
      }
    }
    if (!seen[dst]) throw InvariantViolation("solve_exact: basis is not a spanning tree");
    std::vector<std::size_t> path;  // basic cells from dst back to src
    for (std::size_t node = dst; node != src;) {
      const std::size_t k = via[node];
      path.push_back(k);
      node = node < n_ ? n_ + basis_[k].j : basis_[k].i;
    }
    std::reverse(path.begin(), path.end());
    // Path cells alternate -theta, +theta starting next to the entering cell's row.
    std::size_t leave = basis_.size();
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < path.size(); t += 2) {
      const Cell& c = basis_[path[t]];
      const bool better = c.flow < theta;
      const bool tie = c.flow == theta && cell_index(c) < cell_index(basis_[leave]);
      if (better || tie) {
        theta = c.flow;
        leave = path[t];
      }
    }
    for (std::size_t t = 0; t < path.size(); ++t) basis_[path[t]].flow += t % 2 == 0 ? -theta : theta;
    basis_[leave] = {ei, ej, theta};
  }

  std::size_t cell_index(const Cell& c) const { return c.i * m_ + c.j; }

  std::size_t n_, m_;
  const Matrix& cost_;
  double tol_ = 0.0;
  std::vector<Cell> basis_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<double> pot_;
};

}  // namespace

Coupling solve_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Matrix& cost) {
  if (mu.size() == 0 || nu.size() == 0) throw InvalidArgument("solve_exact: empty marginal");
  if (cost.rows() != static_cast<Eigen::Index>(mu.size()) ||
      cost.cols() != static_cast<Eigen::Index>(nu.size()))
    throw InvalidArgument("solve_exact: cost shape does not match marginals");
  if (!cost.allFinite()) throw InvalidArgument("solve_exact: cost must be finite");
  TransportSimplex simplex(mu.weights(), nu.weights(), cost);
  return Coupling(simplex.solve(), mu, nu);
}

Coupling solve_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostSpec& cost) {
  return solve_exact(mu, nu, cost_matrix(cost, mu, nu));
}

}  // namespace ldot
