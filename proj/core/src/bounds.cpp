#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "ldot/errors.hpp"
#include "ldot/exact.hpp"
#include "ldot/ldp.hpp"

namespace ldot {

namespace {

BoundCheckReport finish(const EntropicSolution& sol, int k, double delta, double delta_prime,
                        std::vector<std::vector<IndexPair>> tuples) {
  BoundCheckReport rep;
  rep.k = k;
  rep.delta = delta;
  rep.delta_prime = delta_prime;
  rep.set_A = std::move(tuples);
  rep.degenerate = rep.set_A.empty();
  // log of prod pi(x_i,y_i) per tuple, then log-sum-exp over the set.
  std::vector<double> logs;
  for (const auto& t : rep.set_A) {
    double l = 0.0;
    for (const auto& [i, j] : t) l += sol.log_mass(i, j);
    logs.push_back(l);
  }
  if (!logs.empty()) {
    const double top = *std::max_element(logs.begin(), logs.end());
    double acc = 0.0;
    for (double l : logs) acc += std::exp(l - top);
    rep.log_lhs = top + std::log(acc);
  }
  rep.lhs = std::exp(rep.log_lhs);
  const double log_rhs = -delta / sol.epsilon;
  rep.rhs = std::exp(log_rhs);
  rep.pass = rep.log_lhs <= log_rhs + std::log1p(kBoundSlack);
  return rep;
}

void check_bound_args(const EntropicSolution& sol, const Matrix& cost, double delta) {
  if (!(delta >= 0.0)) throw InvalidArgument("product_bound_check: delta must be nonnegative");
  if (cost.rows() != static_cast<Eigen::Index>(sol.coupling.rows()) ||
      cost.cols() != static_cast<Eigen::Index>(sol.coupling.cols()))
    throw InvalidArgument("product_bound_check: cost shape does not match the solution");
}

}  // namespace

BoundCheckReport product_bound_check(const EntropicSolution& sol, const Matrix& cost, int k,
                                     double delta, int n_tuples, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("product_bound_check: k must be at least 2");
  if (n_tuples < 0) throw InvalidArgument("product_bound_check: n_tuples must be nonnegative");
  check_bound_args(sol, cost, delta);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> row(0, sol.coupling.rows() - 1);
  std::uniform_int_distribution<std::size_t> col(0, sol.coupling.cols() - 1);
  std::set<std::vector<IndexPair>> kept;
  std::vector<IndexPair> tuple(static_cast<std::size_t>(k));
  for (int s = 0; s < n_tuples; ++s) {
    for (auto& p : tuple) p = {row(rng), col(rng)};
    if (cycle_gain(cost, tuple) >= delta) kept.insert(tuple);
  }
  return finish(sol, k, delta, std::numeric_limits<double>::infinity(),
                {kept.begin(), kept.end()});
}

BoundCheckReport product_bound_check(const EntropicSolution& sol, const Matrix& cost,
                                     const std::vector<std::vector<IndexPair>>& tuples,
                                     double delta, double delta_prime) {
  check_bound_args(sol, cost, delta);
  std::set<std::vector<IndexPair>> unique;
  int k = 0;
  for (const auto& t : tuples) {
    if (t.size() < 2) throw InvalidArgument("product_bound_check: tuples need at least two cells");
    if (k == 0) k = static_cast<int>(t.size());
    if (static_cast<int>(t.size()) != k)
      throw InvalidArgument("product_bound_check: tuples of different lengths");
    for (const auto& [i, j] : t)
      if (i >= sol.coupling.rows() || j >= sol.coupling.cols())
        throw InvalidArgument("product_bound_check: cell outside the instance");
    const double gap = cycle_gain(cost, t);
    if (gap < delta || gap > delta_prime)
      throw InvalidArgument("product_bound_check: tuple outside A_k(delta, delta')");
    unique.insert(t);
  }
  return finish(sol, k, delta, delta_prime, {unique.begin(), unique.end()});
}

std::vector<CostGapPoint> cost_gap_curve(const std::vector<EntropicSolution>& ladder,
                                         const Coupling& pi_star, const Matrix& cost) {
  const double base = transport_cost(pi_star, cost);
  std::vector<CostGapPoint> out;
  for (const auto& sol : ladder) {
    if (sol.coupling.rows() != pi_star.rows() || sol.coupling.cols() != pi_star.cols())
      throw InvalidArgument("cost_gap_curve: solution shape does not match the optimal coupling");
    const double gap = transport_cost(sol.coupling, cost) - base;
    if (gap < -1e-10)
      throw InvariantViolation("cost_gap_curve: entropic coupling beats the optimal cost");
    out.push_back({sol.epsilon, gap, gap / sol.epsilon});
  }
  return out;
}

CompareReport compare_rate_field(const SweepResult& sweep, const RateField& field,
                                 bool probe_passed, double rel_tol) {
  CompareReport rep;
  rep.mode = probe_passed ? CompareMode::two_sided : CompareMode::upper_bound_only;
  for (std::size_t s = 0; s < sweep.target_sets.size(); ++s) {
    const auto& set = sweep.target_sets[s];
    if (set.size() != 1) throw InvalidArgument("compare_rate_field: target sets must be single cells");
    CellComparison cmp;
    cmp.cell = set.front();
    cmp.rate = field.at(cmp.cell.first, cmp.cell.second);  // DomainError on index mismatch
    cmp.empirical = sweep.extrapolated_rate[s];
    cmp.discrepancy = std::abs(cmp.empirical - cmp.rate);
    const double allowance = rel_tol * std::max(1.0, cmp.rate);
    bool ok;
    if (rep.mode == CompareMode::two_sided) {
      ok = cmp.discrepancy <= allowance;
      cmp.flag = ok ? "ok" : "violation";
    } else {
      ok = cmp.empirical >= cmp.rate - allowance;
      cmp.flag = ok ? "upper-bound only" : "violation";
    }
    if (!ok || !std::isfinite(cmp.empirical)) {
      cmp.flag = "violation";
      ++rep.flagged_cells;
    }
    rep.max_abs = std::max(rep.max_abs, cmp.discrepancy);
    rep.cells.push_back(std::move(cmp));
  }
  return rep;
}

}  // namespace ldot
