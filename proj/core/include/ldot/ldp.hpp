#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ldot/coupling.hpp"
#include "ldot/matrix.hpp"
#include "ldot/measure.hpp"
#include "ldot/rate.hpp"
#include "ldot/sinkhorn.hpp"
#include "ldot/support.hpp"

namespace ldot {

/// A target set B of cells.
using TargetSet = std::vector<IndexPair>;

inline constexpr double kDefaultLadderRatio = 0.70710678118654752440;
inline constexpr int kDefaultLadderRungs = 8;

/// start, start*ratio, ..., start*ratio^(count-1).
std::vector<double> geometric_ladder(double start, double ratio = kDefaultLadderRatio,
                                     int count = kDefaultLadderRungs);

struct AffineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< root mean square of the fit residuals
  int points = 0;
};

/// Least squares y = intercept + slope * x.
AffineFit fit_affine(const std::vector<double>& x, const std::vector<double>& y);

/// Smallest gap between consecutive atoms of a 1-D measure (0 for one atom or d > 1).
double grid_spacing(const DiscreteMeasure& m);

/// Smallest epsilon at which a discretized continuous instance is trusted: h^2 with h the
/// coarser of the two grid spacings.
double validity_floor(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

struct SweepOptions {
  SinkhornOptions solver;
  /// Rungs below this epsilon are marked invalid and excluded from the fit.
  double min_valid_epsilon = 0.0;
  bool keep_solutions = false;
};

struct SweepResult {
  std::vector<double> epsilons;
  std::vector<bool> valid;
  std::vector<bool> converged;
  std::vector<int> iterations;
  std::vector<TargetSet> target_sets;
  /// Indexed [set][rung]; NaN on rungs whose solve did not converge.
  std::vector<std::vector<double>> per_set_mass;
  std::vector<std::vector<double>> per_set_log_mass;
  std::vector<std::vector<double>> per_set_rate;  ///< -eps log pi_eps(B)
  std::vector<double> extrapolated_rate;
  std::vector<AffineFit> fit_diagnostics;
  std::vector<EntropicSolution> solutions;  ///< filled when keep_solutions is set
};

/// Solves each rung warm-started from the previous one and records pi_eps(B) for every set.
/// The extrapolated rate of a set is the intercept of the affine fit of -eps log pi_eps(B)
/// against eps over the smallest half of the valid rungs.
SweepResult epsilon_sweep(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Matrix& cost,
                          const std::vector<double>& ladder, const std::vector<TargetSet>& sets,
                          const SweepOptions& opts = {});

/// Fit over the smallest half of the valid rungs of one rate series.
AffineFit extrapolate_rate(const std::vector<double>& epsilons, const std::vector<double>& rates,
                           const std::vector<bool>& valid);

/// True if pi_eps(B) never decreases as epsilon decreases over the valid rungs.
bool mass_nondecreasing(const SweepResult& sweep, std::size_t set_id, double slack = 1e-12);

struct BoundCheckReport {
  int k = 0;
  double delta = 0.0;
  double delta_prime = std::numeric_limits<double>::infinity();
  std::vector<std::vector<IndexPair>> set_A;
  double log_lhs = -std::numeric_limits<double>::infinity();
  double lhs = 0.0;
  double rhs = 1.0;
  bool pass = true;
  /// No sampled tuple reached the gap delta; the bound holds vacuously.
  bool degenerate = false;
};

/// Relative slack on lhs <= rhs for floating point summation.
inline constexpr double kBoundSlack = 1e-12;

/// Samples n_tuples uniform k-tuples of cells, keeps the distinct ones whose cycle gap
/// sum c(x_i,y_i) - sum c(x_i,y_{i+1}) is at least delta, and checks
/// sum over kept tuples of prod pi(x_i,y_i) <= exp(-delta/eps).
BoundCheckReport product_bound_check(const EntropicSolution& sol, const Matrix& cost, int k,
                                     double delta, int n_tuples, std::uint64_t seed);

/// Same check on an explicit set; every tuple must have gap in [delta, delta_prime].
BoundCheckReport product_bound_check(const EntropicSolution& sol, const Matrix& cost,
                                     const std::vector<std::vector<IndexPair>>& tuples,
                                     double delta,
                                     double delta_prime = std::numeric_limits<double>::infinity());

struct CostGapPoint {
  double epsilon = 0.0;
  double gap = 0.0;         ///< int c d pi_eps - int c d pi_*
  double normalized = 0.0;  ///< gap / eps
};

/// Throws InvariantViolation if some gap is below -1e-10.
std::vector<CostGapPoint> cost_gap_curve(const std::vector<EntropicSolution>& ladder,
                                         const Coupling& pi_star, const Matrix& cost);

enum class CompareMode { two_sided, upper_bound_only };

struct CellComparison {
  IndexPair cell;
  double rate = 0.0;
  double empirical = 0.0;
  double discrepancy = 0.0;  ///< |empirical - rate|
  std::string flag;          ///< "ok", "upper-bound only" or "violation"
};

struct CompareReport {
  CompareMode mode = CompareMode::two_sided;
  std::vector<CellComparison> cells;
  double max_abs = 0.0;
  std::size_t flagged_cells = 0;  ///< cells outside the tolerance
  bool pass() const { return flagged_cells == 0; }
};

inline constexpr double kCompareRelTol = 0.05;

/// Compares extrapolated rates of singleton target sets with the rate field. With a passed
/// independence probe the check is |emp - I| <= tol*max(1,I); otherwise only
/// emp >= I - tol*max(1,I) is required and passing cells are labelled "upper-bound only".
CompareReport compare_rate_field(const SweepResult& sweep, const RateField& field,
                                 bool probe_passed, double rel_tol = kCompareRelTol);

}  // namespace ldot
