#include "ldot/sinkhorn.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <random>

#include "ldot/block_balance.hpp"
#include "ldot/errors.hpp"
#include "ldot/parallel.hpp"

namespace ldot {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log sum_k exp(base[k] + shift[k] + row[k]), with max subtraction.
double log_sum_exp(const double* row, const std::vector<double>& base,
                   const std::vector<double>& shift) {
  const std::size_t len = base.size();
  double top = kNegInf;
  for (std::size_t k = 0; k < len; ++k) top = std::max(top, base[k] + shift[k] + row[k]);
  if (top == kNegInf) return kNegInf;
  double acc = 0.0;
  for (std::size_t k = 0; k < len; ++k) acc += std::exp(base[k] + shift[k] + row[k] - top);
  return top + std::log(acc);
}

std::vector<double> log_weights(const DiscreteMeasure& m) {
  std::vector<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = std::log(m.weight(i));
  return out;
}

}  // namespace

double EntropicSolution::log_mass(std::size_t i, std::size_t j) const {
  return std::log(coupling.mu().weight(i)) + std::log(coupling.nu().weight(j)) + log_density(i, j);
}

double EntropicSolution::log_density(std::size_t i, std::size_t j) const {
  return log_f[i] + log_g[j] -
         cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / epsilon;
}

EntropicSolution solve_entropic(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const Matrix& cost, double epsilon, const SinkhornOptions& opts) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw InvalidArgument("solve_entropic: epsilon must be positive and finite");
  const auto n = static_cast<Eigen::Index>(mu.size());
  const auto m = static_cast<Eigen::Index>(nu.size());
  if (n == 0 || m == 0) throw InvalidArgument("solve_entropic: empty marginal");
  if (cost.rows() != n || cost.cols() != m)
    throw InvalidArgument("solve_entropic: cost shape does not match marginals");
  if (!cost.allFinite()) throw InvalidArgument("solve_entropic: cost must be finite");
  if (!(opts.tol > 0.0)) throw InvalidArgument("solve_entropic: tol must be positive");
  if (opts.max_iter < 1) throw InvalidArgument("solve_entropic: max_iter must be positive");

  const Matrix kernel = -cost / epsilon;
  const Matrix kernel_t = kernel.transpose();
  const std::vector<double> lmu = log_weights(mu);
  const std::vector<double> lnu = log_weights(nu);
  const std::vector<double>& wmu = mu.weights();
  const std::vector<double>& wnu = nu.weights();

  std::vector<double> a(static_cast<std::size_t>(n), 0.0);
  std::vector<double> b(static_cast<std::size_t>(m), 0.0);
  if (opts.warm_start) {
    const WarmStart& ws = *opts.warm_start;
    if (ws.log_f.size() != a.size() || ws.log_g.size() != b.size() || !(ws.epsilon > 0.0))
      throw InvalidArgument("solve_entropic: warm start does not match the instance");
    const double r = ws.epsilon / epsilon;
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = ws.log_f[i] * r;
    for (std::size_t j = 0; j < b.size(); ++j) b[j] = ws.log_g[j] * r;
  }

  std::vector<double> row_lse(static_cast<std::size_t>(n));
  auto column_pass = [&] {
    detail::parallel_for<Eigen::Index>(m, opts.threads, [&](Eigen::Index j) {
      b[static_cast<std::size_t>(j)] = -log_sum_exp(kernel_t.row(j).data(), lmu, a);
    });
  };
  detail::ScalingState state{kernel, lmu, lnu, wmu, wnu, a, b};
  const bool can_balance = opts.block_balance && n > 1 && m > 1;
  // Below this, a gauge shift between blocks is indistinguishable from rounding.
  const double gauge_tol = std::max(opts.tol, 1e-13);
  auto rebalance = [&]() -> double {
    const auto blocks = detail::strong_blocks(state, opts.strong_ratio);
    if (blocks.count < 2 || blocks.count > opts.max_blocks) return 0.0;
    return detail::balance_blocks(state, blocks);
  };

  column_pass();
  bool converged = false;
  int iter = 0;
  while (iter < opts.max_iter) {
    ++iter;
    detail::parallel_for<Eigen::Index>(n, opts.threads, [&](Eigen::Index i) {
      row_lse[static_cast<std::size_t>(i)] = log_sum_exp(kernel.row(i).data(), lnu, b);
    });
    // Columns are exact here, so the row defects are the full marginal residual.
    double residual = 0.0;
    double drift = 0.0;
    double drift_floor = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] + row_lse[i];
      residual = std::max(residual, wmu[i] * std::abs(std::expm1(d)));
      drift = std::max(drift, std::abs(d));
      drift_floor = std::max(drift_floor, 64.0 * DBL_EPSILON * (1.0 + std::abs(a[i])));
    }
    if (residual <= opts.tol && drift <= std::max(opts.tol, drift_floor)) {
      if (can_balance && rebalance() > gauge_tol) {
        column_pass();
        continue;
      }
      converged = true;
      break;
    }
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = -row_lse[i];
    column_pass();
    if (can_balance && opts.balance_every > 0 && iter % opts.balance_every == 0) {
      if (rebalance() > 0.0) column_pass();
    }
  }

  // Gauge: sum_i mu_i log_f(i) = 0.
  double shift = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) shift += wmu[i] * a[i];
  for (double& v : a) v -= shift;
  for (double& v : b) v += shift;

  Matrix mass(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) mass(i, j) = std::exp(state.log_mass(i, j));

  Coupling probe = Coupling::unchecked(mass, mu, nu);
  const double residual = probe.marginal_residual();
  converged = converged && residual <= opts.tol;

  EntropicSolution sol{converged ? Coupling(std::move(mass), mu, nu, 2.0 * opts.tol)
                                 : std::move(probe),
                       std::move(a),
                       std::move(b),
                       epsilon,
                       residual,
                       iter,
                       converged,
                       cost};
  return sol;
}

EntropicSolution solve_entropic(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const CostSpec& cost, double epsilon, const SinkhornOptions& opts) {
  return solve_entropic(mu, nu, cost_matrix(cost, mu, nu), epsilon, opts);
}

namespace {

// log Z(i,j) read from the stored mass when it is representable, from the factors otherwise.
double stored_log_density(const EntropicSolution& sol, std::size_t i, std::size_t j) {
  const double p = sol.coupling.mass(i, j);
  if (p >= DBL_MIN)
    return std::log(p) - std::log(sol.coupling.mu().weight(i)) -
           std::log(sol.coupling.nu().weight(j));
  return sol.log_density(i, j);
}

}  // namespace

double cycle_invariance_defect(const EntropicSolution& sol, const Matrix& cost,
                               std::span<const IndexPair> tuple) {
  const std::size_t k = tuple.size();
  if (k == 0) return 0.0;
  const std::size_t n = sol.coupling.rows();
  const std::size_t m = sol.coupling.cols();
  for (const auto& [i, j] : tuple)
    if (i >= n || j >= m) throw InvalidArgument("cycle_invariance_defect: index out of range");
  double logs = 0.0;
  double costs = 0.0;
  for (std::size_t t = 0; t < k; ++t) {
    const auto [i, j] = tuple[t];
    const std::size_t jn = tuple[(t + 1) % k].second;
    logs += stored_log_density(sol, i, j) - stored_log_density(sol, i, jn);
    costs += cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
             cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(jn));
  }
  return logs + costs / sol.epsilon;
}

double invariance_residual(const EntropicSolution& sol, const Matrix& cost, int k, int n_samples,
                           std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("invariance_residual: k must be at least 2");
  if (n_samples < 0) throw InvalidArgument("invariance_residual: n_samples must be nonnegative");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> row(0, sol.coupling.rows() - 1);
  std::uniform_int_distribution<std::size_t> col(0, sol.coupling.cols() - 1);
  std::vector<IndexPair> tuple(static_cast<std::size_t>(k));
  double worst = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    for (auto& p : tuple) p = {row(rng), col(rng)};
    worst = std::max(worst, std::abs(cycle_invariance_defect(sol, cost, tuple)));
  }
  return worst;
}

}  // namespace ldot
