#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "ldot/errors.hpp"
#include "ldot/exact.hpp"

namespace ldot {

namespace {

using Amounts = std::vector<long long>;

long denominator_of(double w) {
  for (long q = 1; q <= kOracleMaxDenominator; ++q) {
    const double scaled = w * static_cast<double>(q);
    if (std::abs(scaled - std::round(scaled)) <= 1e-9 * static_cast<double>(q)) return q;
  }
  throw InvalidArgument("brute_force_oracle: weights must be rationals with denominator <= 24");
}

// Integer transportation instance; supplies and demands both sum to `scale`.
struct IntegerInstance {
  long long scale = 1;
  Amounts supply;
  Amounts demand;
};

IntegerInstance integerize(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  IntegerInstance inst;
  for (const auto* m : {&mu, &nu})
    for (double w : m->weights()) inst.scale = std::lcm(inst.scale, denominator_of(w));
  auto convert = [&](const DiscreteMeasure& m) {
    Amounts out;
    long long total = 0;
    for (double w : m.weights()) {
      out.push_back(std::llround(w * static_cast<double>(inst.scale)));
      total += out.back();
    }
    if (total != inst.scale)
      throw InvalidArgument("brute_force_oracle: rational weights do not sum to one");
    return out;
  };
  inst.supply = convert(mu);
  inst.demand = convert(nu);
  return inst;
}

// Every vertex of the transportation polytope arises by repeatedly saturating a cell
// (i,j) with min(s_i, d_j): the support of a vertex is a forest, and a leaf line carries
// its whole remaining amount on a single cell.
class VertexSearch {
 public:
  VertexSearch(const IntegerInstance& inst, const Matrix& cost)
      : inst_(inst), cost_(cost), n_(inst.supply.size()), m_(inst.demand.size()) {}

  double best(const Amounts& s, const Amounts& d) {
    Amounts key = s;
    key.insert(key.end(), d.begin(), d.end());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    double value = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < n_; ++i) {
      if (s[i] == 0) continue;
      for (std::size_t j = 0; j < m_; ++j) {
        if (d[j] == 0) continue;
        const long long x = std::min(s[i], d[j]);
        Amounts s2 = s, d2 = d;
        s2[i] -= x;
        d2[j] -= x;
        const double v = c(i, j) * static_cast<double>(x) + best(s2, d2);
        if (!any || v < value) value = v;
        any = true;
      }
    }
    memo_.emplace(std::move(key), value);
    return value;
  }

  void collect(const Amounts& s, const Amounts& d, std::vector<long long>& flow, double tol) {
    if (!visited_.insert(flow).second) return;
    const double here = best(s, d);
    bool done = true;
    for (std::size_t i = 0; i < n_; ++i) {
      if (s[i] == 0) continue;
      for (std::size_t j = 0; j < m_; ++j) {
        if (d[j] == 0) continue;
        done = false;
        const long long x = std::min(s[i], d[j]);
        Amounts s2 = s, d2 = d;
        s2[i] -= x;
        d2[j] -= x;
        const double v = c(i, j) * static_cast<double>(x) + best(s2, d2);
        if (v > here + tol) continue;
        flow[i * m_ + j] += x;
        collect(s2, d2, flow, tol);
        flow[i * m_ + j] -= x;
      }
    }
    if (done) vertices_.insert(flow);
  }

  const std::set<std::vector<long long>>& vertices() const { return vertices_; }

 private:
  double c(std::size_t i, std::size_t j) const {
    return cost_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  const IntegerInstance& inst_;
  const Matrix& cost_;
  std::size_t n_, m_;
  std::map<Amounts, double> memo_;
  std::set<std::vector<long long>> visited_;
  std::set<std::vector<long long>> vertices_;
};

}  // namespace

OracleResult brute_force_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const Matrix& cost) {
  if (mu.size() > kOracleMaxAtoms || nu.size() > kOracleMaxAtoms)
    throw BudgetExceeded("brute_force_oracle: instance too large (at most 6 atoms per side)");
  if (mu.size() == 0 || nu.size() == 0) throw InvalidArgument("brute_force_oracle: empty marginal");
  if (cost.rows() != static_cast<Eigen::Index>(mu.size()) ||
      cost.cols() != static_cast<Eigen::Index>(nu.size()))
    throw InvalidArgument("brute_force_oracle: cost shape does not match marginals");

  const IntegerInstance inst = integerize(mu, nu);
  VertexSearch search(inst, cost);
  const double total = search.best(inst.supply, inst.demand);
  const double tol = 1e-12 * std::max(1.0, std::abs(total));
  std::vector<long long> flow(mu.size() * nu.size(), 0);
  search.collect(inst.supply, inst.demand, flow, tol);

  OracleResult out;
  const double scale = static_cast<double>(inst.scale);
  out.value = total / scale;
  for (const auto& v : search.vertices()) {
    Matrix pi(static_cast<Eigen::Index>(mu.size()), static_cast<Eigen::Index>(nu.size()));
    for (std::size_t i = 0; i < mu.size(); ++i)
      for (std::size_t j = 0; j < nu.size(); ++j)
        pi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            static_cast<double>(v[i * nu.size() + j]) / scale;
    out.optimal_vertices.push_back(std::move(pi));
  }
  return out;
}

}  // namespace ldot
