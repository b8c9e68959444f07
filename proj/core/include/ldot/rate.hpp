#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ldot/cost.hpp"
#include "ldot/exact.hpp"
#include "ldot/matrix.hpp"
#include "ldot/support.hpp"

namespace ldot {

enum class RateMethod { primal_brute, primal_exact, dual };

std::string_view to_string(RateMethod method);
RateMethod parse_rate_method(std::string_view name);

/// Values of the rate function on X0 x Y0 (rows follow x_indices, columns y_indices).
struct RateField {
  std::vector<std::size_t> x_indices;
  std::vector<std::size_t> y_indices;
  Matrix values;
  RateMethod method = RateMethod::primal_exact;

  /// Value at atom indices (i,j); throws DomainError outside the grid.
  double at(std::size_t i, std::size_t j) const;
};

/// Upper limit on the number of (tuple, permutation) terms the brute-force method visits.
inline constexpr double kBruteForceBudget = 1e7;

/// sup over k <= k_max, over k-1 distinct support pairs and over all permutations of
///   sum_i c(x_i,y_i) - sum_i c(x_i,y_sigma(i)),  with (x_1,y_1) = point.
/// Tuples are enumerated lexicographically, permutations in Heap's order.
double rate_primal_bruteforce(const SupportSet& support, const Matrix& cost, IndexPair point,
                              int k_max);

/// Longest cycle through `point` in the graph over the support, edge p -> q weighted by
/// c(x_q,y_q) - c(x_p,y_q). Requires the row or the column of `point` to be in the support's
/// projections (DomainError otherwise); throws PositiveCycleError on non-monotone supports.
double rate_primal_exact(const SupportSet& support, const Matrix& cost, IndexPair point);

/// c(x,y) - psi_c(y) + psi(x); the point must lie in X0 x Y0.
double rate_dual(const KantorovichPotentials& potentials, const Matrix& cost, IndexPair point);

/// Default threshold below which the probe spread certifies the dual formula.
inline constexpr double kProbeTol = 1e-8;

struct ProbeResult {
  /// max over X0 x Y0 of the spread of psi_c(y) - psi(x) across the base pairs.
  double spread = 0.0;
  std::vector<IndexPair> base_pairs;
  bool passed(double tol = kProbeTol) const { return spread <= tol; }
};

/// Compares the potentials anchored at n_base_pairs evenly spaced support pairs.
/// A single-pair support gives spread 0; otherwise the support needs at least n_base_pairs pairs.
ProbeResult independence_probe(const SupportSet& support, const Matrix& cost, int n_base_pairs);

/// c(x,y) + c(x',y') - c(x,y') - c(x',y).
double cross_difference(const Matrix& cost, std::size_t i, std::size_t j, std::size_t i2,
                        std::size_t j2);
double cross_difference(const CostSpec& cost, std::span<const double> x, std::span<const double> y,
                        std::span<const double> x2, std::span<const double> y2);

struct RateFieldOptions {
  /// Brute force only; 0 means min(|support| + 1, 6).
  int k_max = 0;
  /// Dual only; defaults to the first support pair.
  std::optional<IndexPair> base_pair;
  int threads = 1;
};

/// Rate function on X0 x Y0 by the chosen method.
RateField rate_field(const SupportSet& support, const Matrix& cost, RateMethod method,
                     const RateFieldOptions& opts = {});

inline constexpr double kPositivityTol = 1e-7;

struct PositivityReport {
  /// Off-support cells of the field with I <= tol, as atom index pairs in row-major order.
  std::vector<IndexPair> off_support_zero_pairs;
  /// Smallest I > tol over off-support cells; +infinity if there is none.
  double min_positive_value = 0.0;
};

PositivityReport positivity_scan(const RateField& field, const SupportSet& support,
                                 double tol = kPositivityTol);

}  // namespace ldot
