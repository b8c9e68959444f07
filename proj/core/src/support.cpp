#include "ldot/support.hpp"

#include <algorithm>
#include <string>

#include "ldot/errors.hpp"

namespace ldot {

SupportSet::SupportSet(std::vector<IndexPair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw InvalidArgument("support set is empty");
  std::sort(pairs_.begin(), pairs_.end());
  if (std::adjacent_find(pairs_.begin(), pairs_.end()) != pairs_.end())
    throw InvalidArgument("support set has duplicate pairs");

  for (const auto& [i, j] : pairs_) {
    x_proj_.push_back(i);
    y_proj_.push_back(j);
  }
  x_proj_.erase(std::unique(x_proj_.begin(), x_proj_.end()), x_proj_.end());
  std::sort(y_proj_.begin(), y_proj_.end());
  y_proj_.erase(std::unique(y_proj_.begin(), y_proj_.end()), y_proj_.end());

  if (x_proj_.size() == pairs_.size()) {
    std::vector<std::size_t> map;
    map.reserve(pairs_.size());
    for (const auto& p : pairs_) map.push_back(p.second);
    graph_map_ = std::move(map);
  }
}

bool SupportSet::contains(const IndexPair& p) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), p);
}

bool SupportSet::contains_x(std::size_t i) const {
  return std::binary_search(x_proj_.begin(), x_proj_.end(), i);
}

bool SupportSet::contains_y(std::size_t j) const {
  return std::binary_search(y_proj_.begin(), y_proj_.end(), j);
}

std::optional<std::size_t> SupportSet::x_position(std::size_t i) const {
  const auto it = std::lower_bound(x_proj_.begin(), x_proj_.end(), i);
  if (it == x_proj_.end() || *it != i) return std::nullopt;
  return static_cast<std::size_t>(it - x_proj_.begin());
}

std::optional<std::size_t> SupportSet::y_position(std::size_t j) const {
  const auto it = std::lower_bound(y_proj_.begin(), y_proj_.end(), j);
  if (it == y_proj_.end() || *it != j) return std::nullopt;
  return static_cast<std::size_t>(it - y_proj_.begin());
}

SupportSet extract_support(const Coupling& coupling, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw InvalidArgument("extract_support: threshold must lie in (0,1), got " +
                          std::to_string(threshold));
  const Matrix& m = coupling.mass();
  const double cut = threshold * m.maxCoeff();
  std::vector<IndexPair> pairs;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) > cut) pairs.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  if (pairs.empty()) throw InvalidArgument("extract_support: no cell above threshold");
  return SupportSet(std::move(pairs));
}

}  // namespace ldot
