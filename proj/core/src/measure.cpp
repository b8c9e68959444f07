#include "ldot/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ldot/errors.hpp"

namespace ldot {

DiscreteMeasure build_measure(const std::vector<std::vector<double>>& points,
                              const std::vector<double>& weights) {
  if (points.empty()) throw InvalidArgument("build_measure: empty input");
  if (points.size() != weights.size())
    throw InvalidArgument("build_measure: " + std::to_string(points.size()) + " points but " +
                          std::to_string(weights.size()) + " weights");
  const std::size_t dim = points.front().size();
  if (dim == 0) throw InvalidArgument("build_measure: points must have at least one coordinate");

  std::vector<std::size_t> keep;
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim)
      throw InvalidArgument("build_measure: point " + std::to_string(i) + " has dimension " +
                            std::to_string(points[i].size()) + ", expected " +
                            std::to_string(dim));
    for (double x : points[i])
      if (!std::isfinite(x)) throw InvalidArgument("build_measure: non-finite coordinate");
    const double w = weights[i];
    if (!std::isfinite(w) || w < 0.0)
      throw InvalidArgument("build_measure: weight " + std::to_string(i) +
                            " is negative or non-finite");
    if (w > 0.0) {
      keep.push_back(i);
      total += w;
    }
  }
  if (keep.empty()) throw InvalidArgument("build_measure: all weights are zero");

  if (dim == 1) {
    std::stable_sort(keep.begin(), keep.end(),
                     [&](std::size_t a, std::size_t b) { return points[a][0] < points[b][0]; });
  }
  // Duplicates are checked over all atoms, including zero-weight ones.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  for (std::size_t k = 1; k < order.size(); ++k)
    if (points[order[k]] == points[order[k - 1]])
      throw InvalidArgument("build_measure: duplicate points at input rows " +
                            std::to_string(order[k - 1]) + " and " + std::to_string(order[k]));

  DiscreteMeasure m;
  m.dim_ = dim;
  m.coords_.reserve(keep.size() * dim);
  m.weights_.reserve(keep.size());
  for (std::size_t i : keep) {
    m.coords_.insert(m.coords_.end(), points[i].begin(), points[i].end());
    m.weights_.push_back(weights[i] / total);
  }
  return m;
}

DiscreteMeasure build_measure_1d(std::span<const double> points, std::span<const double> weights) {
  std::vector<std::vector<double>> pts;
  pts.reserve(points.size());
  for (double x : points) pts.push_back({x});
  return build_measure(pts, std::vector<double>(weights.begin(), weights.end()));
}

DiscreteMeasure uniform_measure_1d(std::span<const double> points) {
  const std::vector<double> w(points.size(), 1.0);
  return build_measure_1d(points, w);
}

bool approx_equal(const DiscreteMeasure& a, const DiscreteMeasure& b, double weight_tol) {
  if (a.size() != b.size() || a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto pa = a.point(i);
    const auto pb = b.point(i);
    if (!std::equal(pa.begin(), pa.end(), pb.begin())) return false;
    if (std::abs(a.weight(i) - b.weight(i)) > weight_tol) return false;
  }
  return true;
}

}  // namespace ldot
