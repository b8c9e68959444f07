#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ldot/errors.hpp"
#include "ldot/exact.hpp"
#include "ldot/longest_path.hpp"

namespace ldot {

double KantorovichPotentials::psi_at(std::size_t i) const {
  const auto it = std::lower_bound(x_indices.begin(), x_indices.end(), i);
  if (it == x_indices.end() || *it != i)
    throw DomainError("psi: row " + std::to_string(i) + " is not in the support projection");
  return psi[static_cast<std::size_t>(it - x_indices.begin())];
}

double KantorovichPotentials::psi_c_at(std::size_t j) const {
  const auto it = std::lower_bound(y_indices.begin(), y_indices.end(), j);
  if (it == y_indices.end() || *it != j)
    throw DomainError("psi_c: column " + std::to_string(j) + " is not in the support projection");
  return psi_c[static_cast<std::size_t>(it - y_indices.begin())];
}

KantorovichPotentials rockafellar_potential(const SupportSet& support, const Matrix& cost,
                                            const IndexPair& base_pair) {
  const auto& pairs = support.pairs();
  const auto base = std::lower_bound(pairs.begin(), pairs.end(), base_pair);
  if (base == pairs.end() || *base != base_pair)
    throw InvalidArgument("rockafellar_potential: base pair is not in the support");
  auto c = [&](std::size_t i, std::size_t j) {
    return cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };
  for (const auto& [i, j] : pairs)
    if (i >= static_cast<std::size_t>(cost.rows()) || j >= static_cast<std::size_t>(cost.cols()))
      throw InvalidArgument("rockafellar_potential: support index outside the cost table");

  // Edge p -> q: c(x_p,y_p) - c(x_q,y_p).
  const std::size_t g = pairs.size();
  Matrix w(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(g));
  for (std::size_t p = 0; p < g; ++p)
    for (std::size_t q = 0; q < g; ++q)
      w(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) =
          c(pairs[p].first, pairs[p].second) - c(pairs[q].first, pairs[p].second);
  const std::vector<double> dist =
      detail::longest_paths_from(w, static_cast<std::size_t>(base - pairs.begin()));

  KantorovichPotentials out;
  out.x_indices = support.x_proj();
  out.y_indices = support.y_proj();
  out.base_pair = base_pair;
  out.psi.assign(out.x_indices.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t q = 0; q < g; ++q) {
    const std::size_t pos = *support.x_position(pairs[q].first);
    out.psi[pos] = std::max(out.psi[pos], dist[q]);
  }
  // Zero-gain cycles through the base can come back as +1e-17; pin the normalization.
  const std::size_t base_pos = *support.x_position(base_pair.first);
  const double shift = out.psi[base_pos];
  for (double& v : out.psi) v -= shift;
  out.psi[base_pos] = 0.0;
  out.psi_c.resize(out.y_indices.size());
  for (std::size_t t = 0; t < out.y_indices.size(); ++t) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < out.x_indices.size(); ++s)
      best = std::min(best, out.psi[s] + c(out.x_indices[s], out.y_indices[t]));
    out.psi_c[t] = best;
  }
  return out;
}

}  // namespace ldot
