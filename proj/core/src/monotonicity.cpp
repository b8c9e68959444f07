#include <algorithm>
#include <numeric>
#include <random>

#include "ldot/errors.hpp"
#include "ldot/exact.hpp"

namespace ldot {

double cycle_gain(const Matrix& cost, const std::vector<IndexPair>& cycle) {
  double gain = 0.0;
  const std::size_t k = cycle.size();
  for (std::size_t t = 0; t < k; ++t) {
    const auto [i, j] = cycle[t];
    const std::size_t jn = cycle[(t + 1) % k].second;
    gain += cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
            cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(jn));
  }
  return gain;
}

namespace {

class CycleEnumerator {
 public:
  CycleEnumerator(const std::vector<IndexPair>& pairs, const Matrix& cost, double tol,
                  std::vector<CycleViolation>& out)
      : pairs_(pairs), cost_(cost), tol_(tol), out_(out), used_(pairs.size(), 0) {}

  // Cycles are listed once per rotation class: the first element has the smallest index.
  void run(std::size_t k) {
    for (std::size_t first = 0; first < pairs_.size(); ++first) {
      chain_.assign(1, first);
      used_[first] = 1;
      extend(k);
      used_[first] = 0;
    }
  }

 private:
  void extend(std::size_t k) {
    if (chain_.size() == k) {
      std::vector<IndexPair> cycle;
      for (std::size_t p : chain_) cycle.push_back(pairs_[p]);
      const double gain = cycle_gain(cost_, cycle);
      if (gain > tol_) out_.push_back({std::move(cycle), gain});
      return;
    }
    for (std::size_t p = chain_.front() + 1; p < pairs_.size(); ++p) {
      if (used_[p]) continue;
      used_[p] = 1;
      chain_.push_back(p);
      extend(k);
      chain_.pop_back();
      used_[p] = 0;
    }
  }

  const std::vector<IndexPair>& pairs_;
  const Matrix& cost_;
  double tol_;
  std::vector<CycleViolation>& out_;
  std::vector<char> used_;
  std::vector<std::size_t> chain_;
};

}  // namespace

std::vector<CycleViolation> monotonicity_check(const SupportSet& support, const Matrix& cost,
                                               int k_max, const MonotonicityOptions& opts) {
  if (k_max < 2) throw InvalidArgument("monotonicity_check: k_max must be at least 2");
  for (const auto& [i, j] : support.pairs())
    if (i >= static_cast<std::size_t>(cost.rows()) || j >= static_cast<std::size_t>(cost.cols()))
      throw InvalidArgument("monotonicity_check: support index outside the cost table");

  std::vector<CycleViolation> out;
  const auto& pairs = support.pairs();
  const std::size_t g = pairs.size();
  const std::size_t kmax = std::min<std::size_t>(static_cast<std::size_t>(k_max), g);
  if (g < 2) return out;

  if (g <= opts.exhaustive_limit) {
    CycleEnumerator e(pairs, cost, opts.tol, out);
    for (std::size_t k = 2; k <= kmax; ++k) e.run(k);
    return out;
  }

  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<std::size_t> length(2, kmax);
  std::vector<std::size_t> idx(g);
  for (int s = 0; s < opts.n_random; ++s) {
    const std::size_t k = length(rng);
    // Partial Fisher-Yates: k distinct pairs.
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<IndexPair> cycle(k);
    for (std::size_t t = 0; t < k; ++t) {
      std::uniform_int_distribution<std::size_t> pick(t, g - 1);
      std::swap(idx[t], idx[pick(rng)]);
      cycle[t] = pairs[idx[t]];
    }
    const double gain = cycle_gain(cost, cycle);
    if (gain > opts.tol) out.push_back({std::move(cycle), gain});
  }
  return out;
}

}  // namespace ldot
