#include "ldot/longest_path.hpp"

#include <algorithm>
#include <limits>
#include <utility>

#include "ldot/errors.hpp"

namespace ldot::detail {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}  // namespace

std::vector<double> longest_paths_from(const Matrix& w, std::size_t source) {
  std::vector<double> dist(static_cast<std::size_t>(w.rows()), kNegInf);
  dist[source] = 0.0;
  return longest_paths(w, std::move(dist));
}

std::vector<double> longest_paths(const Matrix& w, std::vector<double> dist) {
  const auto n = static_cast<std::size_t>(w.rows());
  // Ignore rounding-level gains, which zero-gain cycles otherwise produce in every round.
  const double relax = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, w.cwiseAbs().maxCoeff());
  for (std::size_t round = 0; round < n; ++round) {
    bool changed = false;
    for (std::size_t p = 0; p < n; ++p) {
      if (dist[p] == kNegInf) continue;
      for (std::size_t q = 0; q < n; ++q) {
        const double cand = dist[p] + w(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
        if (cand > dist[q] + relax) {
          dist[q] = cand;
          changed = true;
        }
      }
    }
    if (!changed) return dist;
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (dist[p] == kNegInf) continue;
    for (std::size_t q = 0; q < n; ++q)
      if (dist[p] + w(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) >
          dist[q] + kPositiveCycleTol)
        throw PositiveCycleError("longest path: positive cycle through the support");
  }
  return dist;
}

}  // namespace ldot::detail
