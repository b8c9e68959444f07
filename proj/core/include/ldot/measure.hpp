#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ldot {

/// Finitely supported probability measure on R^d.
///
/// Atoms are pairwise distinct and carry strictly positive weights summing to one.
/// One-dimensional measures keep their atoms in increasing order; higher-dimensional
/// measures keep input order. Matrix-cost instances use 1-D labels 1, 2, ... as points.
class DiscreteMeasure {
 public:
  /// Empty placeholder; real measures come from build_measure.
  DiscreteMeasure() = default;

  std::size_t size() const noexcept { return weights_.size(); }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  /// First coordinate of atom i; the natural accessor for 1-D measures.
  double coord(std::size_t i) const { return coords_[i * dim_]; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

 private:
  friend DiscreteMeasure build_measure(const std::vector<std::vector<double>>& points,
                                       const std::vector<double>& weights);

  std::size_t dim_ = 1;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

/// Validates, drops zero-weight atoms and renormalizes.
/// Throws InvalidArgument on empty input, length mismatch, negative or non-finite
/// weights, all-zero weights, ragged coordinates or duplicate points.
DiscreteMeasure build_measure(const std::vector<std::vector<double>>& points,
                              const std::vector<double>& weights);

DiscreteMeasure build_measure_1d(std::span<const double> points, std::span<const double> weights);

/// Uniform weights on the given 1-D points.
DiscreteMeasure uniform_measure_1d(std::span<const double> points);

/// Checks two measures for equal atoms and weights up to an absolute weight tolerance.
bool approx_equal(const DiscreteMeasure& a, const DiscreteMeasure& b, double weight_tol);

}  // namespace ldot
