#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ldot/coupling.hpp"

namespace ldot {

using IndexPair = std::pair<std::size_t, std::size_t>;

/// Finite stand-in for the support of a coupling: a set of (row, column) atom indices.
class SupportSet {
 public:
  /// Pairs are sorted and must be nonempty and duplicate-free.
  explicit SupportSet(std::vector<IndexPair> pairs);

  const std::vector<IndexPair>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  const std::vector<std::size_t>& x_proj() const noexcept { return x_proj_; }
  const std::vector<std::size_t>& y_proj() const noexcept { return y_proj_; }

  /// graph_map()[k] is the unique partner of x_proj()[k], present iff the pairs are the graph
  /// of a map.
  const std::optional<std::vector<std::size_t>>& graph_map() const noexcept { return graph_map_; }

  bool contains(const IndexPair& p) const;
  bool contains_x(std::size_t i) const;
  bool contains_y(std::size_t j) const;
  /// Position of i within x_proj(), or nullopt.
  std::optional<std::size_t> x_position(std::size_t i) const;
  std::optional<std::size_t> y_position(std::size_t j) const;

  friend bool operator==(const SupportSet&, const SupportSet&) = default;

 private:
  std::vector<IndexPair> pairs_;
  std::vector<std::size_t> x_proj_;
  std::vector<std::size_t> y_proj_;
  std::optional<std::vector<std::size_t>> graph_map_;
};

/// Default relative threshold for support extraction.
inline constexpr double kDefaultSupportThreshold = 1e-6;

/// Cells whose mass exceeds threshold * (largest cell mass). threshold must lie in (0,1).
SupportSet extract_support(const Coupling& coupling, double threshold = kDefaultSupportThreshold);

}  // namespace ldot
