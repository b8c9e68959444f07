#pragma once

#include <cstdint>
#include <vector>

#include "ldot/cost.hpp"
#include "ldot/coupling.hpp"
#include "ldot/matrix.hpp"
#include "ldot/measure.hpp"
#include "ldot/support.hpp"

namespace ldot {

/// Optimal coupling of the discrete transport problem by the transportation simplex.
/// Starts from the north-west corner basis and pivots with Bland's rule, so ties between
/// optimal vertices are broken deterministically.
Coupling solve_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Matrix& cost);
Coupling solve_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostSpec& cost);

struct OracleResult {
  double value = 0.0;
  std::vector<Matrix> optimal_vertices;
};

inline constexpr std::size_t kOracleMaxAtoms = 6;
inline constexpr long kOracleMaxDenominator = 24;

/// Exhaustive enumeration of the vertices of the transportation polytope.
/// Requires n, m <= 6 and weights that are rationals with denominators <= 24.
/// Throws BudgetExceeded for larger instances and InvalidArgument for irrational weights.
OracleResult brute_force_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const Matrix& cost);

struct CycleViolation {
  std::vector<IndexPair> cycle;
  /// sum c(x_i,y_i) - sum c(x_i,y_{i+1}); positive means the cycle lowers the cost.
  double gain = 0.0;
};

struct MonotonicityOptions {
  double tol = 1e-9;
  /// Supports up to this size are checked exhaustively.
  std::size_t exhaustive_limit = 12;
  int n_random = 100000;
  std::uint64_t seed = 0;
};

/// Cycles of distinct support pairs of length 2..k_max whose gain exceeds tol.
std::vector<CycleViolation> monotonicity_check(const SupportSet& support, const Matrix& cost,
                                               int k_max, const MonotonicityOptions& opts = {});

/// Cycle gain sum c(x_i,y_i) - sum c(x_i,y_{i+1}) of a closed chain of pairs.
double cycle_gain(const Matrix& cost, const std::vector<IndexPair>& cycle);

/// Kantorovich potentials anchored at a base pair of the support.
/// psi is indexed like support.x_proj(), psi_c like support.y_proj().
struct KantorovichPotentials {
  std::vector<std::size_t> x_indices;
  std::vector<std::size_t> y_indices;
  std::vector<double> psi;
  std::vector<double> psi_c;
  IndexPair base_pair;

  /// Throws DomainError outside X0 / Y0.
  double psi_at(std::size_t i) const;
  double psi_c_at(std::size_t j) const;
};

/// psi(x) = sup over chains of support pairs from the base pair ending at x of
/// sum [c(x_i,y_i) - c(x_{i+1},y_i)], evaluated as a longest path; psi_c(y) = min_x psi(x)+c(x,y).
/// Throws PositiveCycleError when the support is not cyclically monotone.
KantorovichPotentials rockafellar_potential(const SupportSet& support, const Matrix& cost,
                                            const IndexPair& base_pair);

}  // namespace ldot
