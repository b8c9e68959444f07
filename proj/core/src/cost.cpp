#include "ldot/cost.hpp"

#include <cmath>

#include "ldot/errors.hpp"

namespace ldot {

std::string_view to_string(CostKind kind) {
  switch (kind) {
    case CostKind::quadratic: return "quadratic";
    case CostKind::notwist: return "notwist";
    case CostKind::matrix: return "matrix";
  }
  return "unknown";
}

CostKind parse_cost_kind(std::string_view name) {
  if (name == "quadratic") return CostKind::quadratic;
  if (name == "notwist") return CostKind::notwist;
  if (name == "matrix") return CostKind::matrix;
  throw InvalidArgument("unknown cost kind '" + std::string(name) + "'");
}

CostSpec CostSpec::matrix(Matrix table) {
  if (table.size() == 0) throw InvalidArgument("cost matrix is empty");
  for (Eigen::Index i = 0; i < table.rows(); ++i)
    for (Eigen::Index j = 0; j < table.cols(); ++j) {
      const double v = table(i, j);
      if (!std::isfinite(v) || v < 0.0)
        throw InvalidArgument("cost matrix entry (" + std::to_string(i) + "," +
                              std::to_string(j) + ") is negative or non-finite");
    }
  CostSpec spec(CostKind::matrix);
  spec.table_ = std::move(table);
  return spec;
}

double eval_cost(const CostSpec& spec, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw InvalidArgument("eval_cost: dimension mismatch " + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()));
  switch (spec.kind()) {
    case CostKind::quadratic: {
      double s = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - y[k];
        s += d * d;
      }
      return s;
    }
    case CostKind::notwist: {
      if (x.size() != 1) throw InvalidArgument("eval_cost: notwist cost is one-dimensional");
      const double d = y[0] - x[0];
      return d >= 0.0 ? d * d : 0.0;
    }
    case CostKind::matrix:
      throw InvalidArgument("eval_cost: matrix cost is evaluated by atom index");
  }
  return 0.0;
}

double eval_cost(const CostSpec& spec, std::size_t i, std::size_t j) {
  if (spec.kind() != CostKind::matrix)
    throw InvalidArgument("eval_cost: index form requires a matrix cost");
  const auto& t = spec.table();
  if (i >= static_cast<std::size_t>(t.rows()) || j >= static_cast<std::size_t>(t.cols()))
    throw InvalidArgument("eval_cost: index (" + std::to_string(i) + "," + std::to_string(j) +
                          ") out of range for " + std::to_string(t.rows()) + "x" +
                          std::to_string(t.cols()) + " cost matrix");
  return t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

Matrix cost_matrix(const CostSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const auto n = static_cast<Eigen::Index>(mu.size());
  const auto m = static_cast<Eigen::Index>(nu.size());
  if (spec.kind() == CostKind::matrix) {
    if (spec.table().rows() != n || spec.table().cols() != m)
      throw InvalidArgument("cost matrix is " + std::to_string(spec.table().rows()) + "x" +
                            std::to_string(spec.table().cols()) + " but marginals have " +
                            std::to_string(n) + " and " + std::to_string(m) + " atoms");
    return spec.table();
  }
  Matrix c(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      c(i, j) = eval_cost(spec, mu.point(static_cast<std::size_t>(i)),
                          nu.point(static_cast<std::size_t>(j)));
  return c;
}

}  // namespace ldot
