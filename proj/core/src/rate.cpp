#include "ldot/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ldot/errors.hpp"
#include "ldot/longest_path.hpp"
#include "ldot/parallel.hpp"

namespace ldot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double at(const Matrix& cost, std::size_t i, std::size_t j) {
  return cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

void check_indices(const SupportSet& support, const Matrix& cost, const char* who) {
  for (const auto& [i, j] : support.pairs())
    if (i >= static_cast<std::size_t>(cost.rows()) || j >= static_cast<std::size_t>(cost.cols()))
      throw InvalidArgument(std::string(who) + ": support index outside the cost table");
}

void check_point(const Matrix& cost, IndexPair point, const char* who) {
  if (point.first >= static_cast<std::size_t>(cost.rows()) ||
      point.second >= static_cast<std::size_t>(cost.cols()))
    throw InvalidArgument(std::string(who) + ": point outside the cost table");
}

// Edge p -> q of the rate graph: c(x_q,y_q) - c(x_p,y_q).
Matrix rate_edges(const SupportSet& support, const Matrix& cost) {
  const auto& pairs = support.pairs();
  const auto g = static_cast<Eigen::Index>(pairs.size());
  Matrix w(g, g);
  for (Eigen::Index p = 0; p < g; ++p)
    for (Eigen::Index q = 0; q < g; ++q) {
      const auto [xq, yq] = pairs[static_cast<std::size_t>(q)];
      w(p, q) = at(cost, xq, yq) - at(cost, pairs[static_cast<std::size_t>(p)].first, yq);
    }
  return w;
}

// Longest paths from the augmented node (x, .) over the support graph; the seed only depends on x.
std::vector<double> augmented_paths(const SupportSet& support, const Matrix& cost, const Matrix& edges,
                                    std::size_t x) {
  const auto& pairs = support.pairs();
  std::vector<double> dist(pairs.size());
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    const auto [xq, yq] = pairs[q];
    dist[q] = at(cost, xq, yq) - at(cost, x, yq);
  }
  return detail::longest_paths(edges, std::move(dist));
}

// Closes the cycle back to (x,y).
double close_cycle(const SupportSet& support, const Matrix& cost, const std::vector<double>& dist,
                   std::size_t x, std::size_t y) {
  const auto& pairs = support.pairs();
  double best = 0.0;
  for (std::size_t p = 0; p < pairs.size(); ++p)
    best = std::max(best, dist[p] + at(cost, x, y) - at(cost, pairs[p].first, y));
  return best;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t t = 1; t <= k; ++t) r = r * static_cast<double>(n - k + t) / static_cast<double>(t);
  return r;
}

}  // namespace

std::string_view to_string(RateMethod method) {
  switch (method) {
    case RateMethod::primal_brute:
      return "primal_brute";
    case RateMethod::primal_exact:
      return "primal_exact";
    case RateMethod::dual:
      return "dual";
  }
  return "?";
}

RateMethod parse_rate_method(std::string_view name) {
  if (name == "primal_brute") return RateMethod::primal_brute;
  if (name == "primal_exact") return RateMethod::primal_exact;
  if (name == "dual") return RateMethod::dual;
  throw InvalidArgument("unknown rate method '" + std::string(name) + "'");
}

double RateField::at(std::size_t i, std::size_t j) const {
  const auto xi = std::lower_bound(x_indices.begin(), x_indices.end(), i);
  const auto yj = std::lower_bound(y_indices.begin(), y_indices.end(), j);
  if (xi == x_indices.end() || *xi != i || yj == y_indices.end() || *yj != j)
    throw DomainError("rate field: point outside X0 x Y0");
  return values(xi - x_indices.begin(), yj - y_indices.begin());
}

double rate_primal_bruteforce(const SupportSet& support, const Matrix& cost, IndexPair point,
                              int k_max) {
  if (k_max < 2 || k_max > 6) throw InvalidArgument("rate_primal_bruteforce: k_max must be in [2, 6]");
  check_indices(support, cost, "rate_primal_bruteforce");
  check_point(cost, point, "rate_primal_bruteforce");
  const auto& pairs = support.pairs();
  const std::size_t g = pairs.size();

  double terms = 0.0;
  double factorial = 1.0;
  for (int k = 2; k <= k_max; ++k) {
    factorial *= k;
    terms += binomial(g, static_cast<std::size_t>(k - 1)) * factorial;
  }
  if (terms > kBruteForceBudget)
    throw BudgetExceeded("rate_primal_bruteforce: enumeration exceeds 1e7 terms");

  double best = 0.0;
  std::vector<IndexPair> tuple;
  std::vector<std::size_t> perm, counter;
  for (std::size_t k = 2; k <= static_cast<std::size_t>(k_max) && k - 1 <= g; ++k) {
    std::vector<std::size_t> comb(k - 1);
    for (std::size_t t = 0; t + 1 < k; ++t) comb[t] = t;
    while (true) {
      tuple.assign(1, point);
      for (std::size_t t : comb) tuple.push_back(pairs[t]);
      double diag = 0.0;
      for (const auto& [i, j] : tuple) diag += at(cost, i, j);

      // Heap's algorithm over the images sigma(0..k-1).
      perm.resize(k);
      for (std::size_t t = 0; t < k; ++t) perm[t] = t;
      counter.assign(k, 0);
      auto visit = [&] {
        double moved = 0.0;
        for (std::size_t t = 0; t < k; ++t) moved += at(cost, tuple[t].first, tuple[perm[t]].second);
        best = std::max(best, diag - moved);
      };
      visit();
      for (std::size_t t = 1; t < k;) {
        if (counter[t] < t) {
          std::swap(perm[t % 2 == 0 ? 0 : counter[t]], perm[t]);
          visit();
          ++counter[t];
          t = 1;
        } else {
          counter[t] = 0;
          ++t;
        }
      }

      // Next combination in lexicographic order.
      std::size_t pos = k - 1;
      while (pos > 0 && comb[pos - 1] == g - (k - 1) + (pos - 1)) --pos;
      if (pos == 0) break;
      ++comb[pos - 1];
      for (std::size_t t = pos; t < k - 1; ++t) comb[t] = comb[t - 1] + 1;
    }
  }
  return best;
}

double rate_primal_exact(const SupportSet& support, const Matrix& cost, IndexPair point) {
  check_indices(support, cost, "rate_primal_exact");
  check_point(cost, point, "rate_primal_exact");
  const auto [x, y] = point;
  if (!support.contains_x(x) && !support.contains_y(y))
    throw DomainError("rate_primal_exact: neither coordinate of the point is in the support projections");
  if (support.contains(point)) return 0.0;

  // The augmented node stays out of the graph: its outgoing edges seed the distances and its
  // incoming edges close the cycle.
  return close_cycle(support, cost, augmented_paths(support, cost, rate_edges(support, cost), x), x, y);
}

double rate_dual(const KantorovichPotentials& potentials, const Matrix& cost, IndexPair point) {
  check_point(cost, point, "rate_dual");
  return at(cost, point.first, point.second) - potentials.psi_c_at(point.second) +
         potentials.psi_at(point.first);
}

ProbeResult independence_probe(const SupportSet& support, const Matrix& cost, int n_base_pairs) {
  if (n_base_pairs < 2) throw InvalidArgument("independence_probe: n_base_pairs must be at least 2");
  const auto& pairs = support.pairs();
  ProbeResult out;
  if (pairs.size() == 1) {
    out.base_pairs = pairs;
    return out;
  }
  const auto nb = static_cast<std::size_t>(n_base_pairs);
  if (pairs.size() < nb)
    throw InvalidArgument("independence_probe: support has fewer pairs than requested base pairs");

  const std::size_t nx = support.x_proj().size(), ny = support.y_proj().size();
  Matrix lo = Matrix::Constant(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(ny), kInf);
  Matrix hi = Matrix::Constant(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(ny), -kInf);
  for (std::size_t b = 0; b < nb; ++b) {
    const IndexPair base = pairs[b * (pairs.size() - 1) / (nb - 1)];
    out.base_pairs.push_back(base);
    const auto pot = rockafellar_potential(support, cost, base);
    for (std::size_t s = 0; s < nx; ++s)
      for (std::size_t t = 0; t < ny; ++t) {
        const double v = pot.psi_c[t] - pot.psi[s];
        const auto r = static_cast<Eigen::Index>(s), c = static_cast<Eigen::Index>(t);
        lo(r, c) = std::min(lo(r, c), v);
        hi(r, c) = std::max(hi(r, c), v);
      }
  }
  out.spread = (hi - lo).maxCoeff();
  return out;
}

double cross_difference(const Matrix& cost, std::size_t i, std::size_t j, std::size_t i2,
                        std::size_t j2) {
  check_point(cost, {i, j}, "cross_difference");
  check_point(cost, {i2, j2}, "cross_difference");
  return at(cost, i, j) + at(cost, i2, j2) - at(cost, i, j2) - at(cost, i2, j);
}

double cross_difference(const CostSpec& cost, std::span<const double> x, std::span<const double> y,
                        std::span<const double> x2, std::span<const double> y2) {
  return eval_cost(cost, x, y) + eval_cost(cost, x2, y2) - eval_cost(cost, x, y2) -
         eval_cost(cost, x2, y);
}

RateField rate_field(const SupportSet& support, const Matrix& cost, RateMethod method,
                     const RateFieldOptions& opts) {
  check_indices(support, cost, "rate_field");
  RateField field;
  field.x_indices = support.x_proj();
  field.y_indices = support.y_proj();
  field.method = method;
  const auto nx = static_cast<Eigen::Index>(field.x_indices.size());
  const auto ny = static_cast<Eigen::Index>(field.y_indices.size());
  field.values.resize(nx, ny);
  const auto& pairs = support.pairs();

  switch (method) {
    case RateMethod::primal_brute: {
      const int k_max = opts.k_max > 0 ? opts.k_max : static_cast<int>(std::min<std::size_t>(pairs.size() + 1, 6));
      detail::parallel_for<Eigen::Index>(nx, opts.threads, [&](Eigen::Index s) {
        for (Eigen::Index t = 0; t < ny; ++t)
          field.values(s, t) = rate_primal_bruteforce(
              support, cost, {field.x_indices[static_cast<std::size_t>(s)], field.y_indices[static_cast<std::size_t>(t)]},
              k_max);
      }, Eigen::Index{1});
      break;
    }
    case RateMethod::primal_exact: {
      const Matrix edges = rate_edges(support, cost);
      detail::parallel_for<Eigen::Index>(nx, opts.threads, [&](Eigen::Index s) {
        const std::size_t x = field.x_indices[static_cast<std::size_t>(s)];
        const std::vector<double> dist = augmented_paths(support, cost, edges, x);
        for (Eigen::Index t = 0; t < ny; ++t) {
          const std::size_t y = field.y_indices[static_cast<std::size_t>(t)];
          field.values(s, t) = support.contains({x, y}) ? 0.0 : close_cycle(support, cost, dist, x, y);
        }
      }, Eigen::Index{8});
      break;
    }
    case RateMethod::dual: {
      const auto pot = rockafellar_potential(support, cost, opts.base_pair.value_or(pairs.front()));
      for (Eigen::Index s = 0; s < nx; ++s)
        for (Eigen::Index t = 0; t < ny; ++t)
          field.values(s, t) = at(cost, field.x_indices[static_cast<std::size_t>(s)],
                                  field.y_indices[static_cast<std::size_t>(t)]) -
                               pot.psi_c[static_cast<std::size_t>(t)] + pot.psi[static_cast<std::size_t>(s)];
      break;
    }
  }
  return field;
}

PositivityReport positivity_scan(const RateField& field, const SupportSet& support, double tol) {
  PositivityReport out;
  out.min_positive_value = kInf;
  for (std::size_t s = 0; s < field.x_indices.size(); ++s)
    for (std::size_t t = 0; t < field.y_indices.size(); ++t) {
      const IndexPair cell{field.x_indices[s], field.y_indices[t]};
      if (support.contains(cell)) continue;
      const double v = field.values(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t));
      if (v <= tol)
        out.off_support_zero_pairs.push_back(cell);
      else
        out.min_positive_value = std::min(out.min_positive_value, v);
    }
  return out;
}

}  // namespace ldot
