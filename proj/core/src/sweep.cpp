#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "ldot/errors.hpp"
#include "ldot/ldp.hpp"

namespace ldot {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double log_set_mass(const EntropicSolution& sol, const TargetSet& set) {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& [i, j] : set) top = std::max(top, sol.log_mass(i, j));
  double acc = 0.0;
  for (const auto& [i, j] : set) acc += std::exp(sol.log_mass(i, j) - top);
  return std::min(0.0, top + std::log(acc));
}

}  // namespace

std::vector<double> geometric_ladder(double start, double ratio, int count) {
  if (!(start > 0.0) || !(ratio > 0.0 && ratio < 1.0) || count < 1)
    throw InvalidArgument("geometric_ladder: need start > 0, 0 < ratio < 1, count >= 1");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(start * std::pow(ratio, i));
  return out;
}

AffineFit fit_affine(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("fit_affine: length mismatch");
  AffineFit fit;
  fit.points = static_cast<int>(x.size());
  if (x.empty()) {
    fit.intercept = kNaN;
    fit.slope = kNaN;
    return fit;
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - fit.intercept - fit.slope * x[k];
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

double grid_spacing(const DiscreteMeasure& m) {
  if (m.dim() != 1 || m.size() < 2) return 0.0;
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < m.size(); ++i) h = std::min(h, m.coord(i) - m.coord(i - 1));
  return h;
}

double validity_floor(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const double h = std::max(grid_spacing(mu), grid_spacing(nu));
  return h * h;
}

AffineFit extrapolate_rate(const std::vector<double>& epsilons, const std::vector<double>& rates,
                           const std::vector<bool>& valid) {
  std::vector<std::size_t> rungs;
  for (std::size_t r = 0; r < epsilons.size(); ++r)
    if (valid[r] && std::isfinite(rates[r])) rungs.push_back(r);
  std::sort(rungs.begin(), rungs.end(),
            [&](std::size_t a, std::size_t b) { return epsilons[a] < epsilons[b]; });
  const std::size_t keep = std::min(rungs.size(), std::max<std::size_t>(2, (rungs.size() + 1) / 2));
  std::vector<double> x, y;
  for (std::size_t t = 0; t < keep; ++t) {
    x.push_back(epsilons[rungs[t]]);
    y.push_back(rates[rungs[t]]);
  }
  return fit_affine(x, y);
}

SweepResult epsilon_sweep(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Matrix& cost,
                          const std::vector<double>& ladder, const std::vector<TargetSet>& sets,
                          const SweepOptions& opts) {
  if (ladder.empty()) throw InvalidArgument("epsilon_sweep: empty ladder");
  for (std::size_t r = 0; r < ladder.size(); ++r) {
    if (!(ladder[r] > 0.0) || !std::isfinite(ladder[r]))
      throw InvalidArgument("epsilon_sweep: ladder values must be positive");
    if (r > 0 && !(ladder[r] < ladder[r - 1]))
      throw InvalidArgument("epsilon_sweep: ladder must be strictly decreasing");
  }
  SweepResult out;
  for (const auto& set : sets) {
    if (set.empty()) throw InvalidArgument("epsilon_sweep: empty target set");
    std::set<IndexPair> unique(set.begin(), set.end());
    for (const auto& [i, j] : unique)
      if (i >= mu.size() || j >= nu.size())
        throw InvalidArgument("epsilon_sweep: target cell outside the instance");
    out.target_sets.emplace_back(unique.begin(), unique.end());
  }

  const std::size_t ns = sets.size(), nr = ladder.size();
  out.epsilons = ladder;
  out.per_set_mass.assign(ns, std::vector<double>(nr, kNaN));
  out.per_set_log_mass.assign(ns, std::vector<double>(nr, kNaN));
  out.per_set_rate.assign(ns, std::vector<double>(nr, kNaN));
  SinkhornOptions solver = opts.solver;
  for (std::size_t r = 0; r < nr; ++r) {
    const double eps = ladder[r];
    EntropicSolution sol = solve_entropic(mu, nu, cost, eps, solver);
    out.converged.push_back(sol.converged);
    out.valid.push_back(sol.converged && eps >= opts.min_valid_epsilon);
    out.iterations.push_back(sol.iterations);
    if (sol.converged) {
      solver.warm_start = sol.warm_start();
      for (std::size_t s = 0; s < ns; ++s) {
        const double lm = log_set_mass(sol, out.target_sets[s]);
        out.per_set_log_mass[s][r] = lm;
        out.per_set_mass[s][r] = std::exp(lm);
        out.per_set_rate[s][r] = -eps * lm;
      }
    }
    if (opts.keep_solutions) out.solutions.push_back(std::move(sol));
  }
  for (std::size_t s = 0; s < ns; ++s) {
    out.fit_diagnostics.push_back(extrapolate_rate(out.epsilons, out.per_set_rate[s], out.valid));
    out.extrapolated_rate.push_back(out.fit_diagnostics.back().intercept);
  }
  return out;
}

bool mass_nondecreasing(const SweepResult& sweep, std::size_t set_id, double slack) {
  if (set_id >= sweep.per_set_mass.size()) throw InvalidArgument("mass_nondecreasing: no such set");
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < sweep.epsilons.size(); ++r) {
    if (!sweep.valid[r]) continue;
    const double m = sweep.per_set_mass[set_id][r];
    if (m < prev - slack) return false;
    prev = std::max(prev, m);
  }
  return true;
}

}  // namespace ldot
