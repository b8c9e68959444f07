#include "ldot/block_balance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ldot::detail {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x != y) parent_[std::max(x, y)] = std::min(x, y);
  }

 private:
  std::vector<std::size_t> parent_;
};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

BlockStructure strong_blocks(const ScalingState& s, double strong_ratio) {
  const auto n = s.kernel.rows();
  const auto m = s.kernel.cols();
  const double log_ratio = std::log(strong_ratio);
  UnionFind uf(static_cast<std::size_t>(n + m));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const double floor =
          log_ratio + std::min(s.lmu[static_cast<std::size_t>(i)], s.lnu[static_cast<std::size_t>(j)]);
      if (s.log_mass(i, j) >= floor)
        uf.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(n + j));
    }

  BlockStructure out;
  out.row_block.resize(static_cast<std::size_t>(n));
  out.col_block.resize(static_cast<std::size_t>(m));
  std::vector<int> label(static_cast<std::size_t>(n + m), -1);
  auto label_of = [&](std::size_t node) {
    const std::size_t root = uf.find(node);
    if (label[root] < 0) label[root] = out.count++;
    return label[root];
  };
  for (Eigen::Index i = 0; i < n; ++i)
    out.row_block[static_cast<std::size_t>(i)] = label_of(static_cast<std::size_t>(i));
  for (Eigen::Index j = 0; j < m; ++j)
    out.col_block[static_cast<std::size_t>(j)] = label_of(static_cast<std::size_t>(n + j));
  return out;
}

std::vector<double> solve_grounded_laplacian(Matrix w, std::vector<double> rhs) {
  const auto nb = w.rows();
  std::vector<double> t(static_cast<std::size_t>(nb), 0.0);
  if (nb < 2) return t;
  std::vector<double> degree(static_cast<std::size_t>(nb), 0.0);
  for (Eigen::Index k = 0; k + 1 < nb; ++k) {
    double d = 0.0;
    for (Eigen::Index l = k + 1; l < nb; ++l) d += w(k, l);
    degree[static_cast<std::size_t>(k)] = d;
    if (d <= 0.0) continue;
    for (Eigen::Index i = k + 1; i < nb; ++i) {
      const double wik = w(i, k);
      if (wik == 0.0) continue;
      rhs[static_cast<std::size_t>(i)] += wik * rhs[static_cast<std::size_t>(k)] / d;
      for (Eigen::Index j = k + 1; j < nb; ++j) {
        if (j == i) continue;
        w(i, j) += wik * w(k, j) / d;
      }
    }
  }
  for (Eigen::Index k = nb - 2; k >= 0; --k) {
    const double d = degree[static_cast<std::size_t>(k)];
    if (d <= 0.0) continue;
    double acc = rhs[static_cast<std::size_t>(k)];
    for (Eigen::Index l = k + 1; l < nb; ++l) acc += w(k, l) * t[static_cast<std::size_t>(l)];
    t[static_cast<std::size_t>(k)] = acc / d;
  }
  return t;
}

double balance_blocks(ScalingState& s, const BlockStructure& blocks) {
  const int nb = blocks.count;
  if (nb < 2) return 0.0;
  const auto n = s.kernel.rows();
  const auto m = s.kernel.cols();

  // log of the mass flowing from the rows of block K into the columns of block L.
  Matrix top = Matrix::Constant(nb, nb, kNegInf);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int bk = blocks.row_block[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m; ++j) {
      const int bl = blocks.col_block[static_cast<std::size_t>(j)];
      if (bk != bl) top(bk, bl) = std::max(top(bk, bl), s.log_mass(i, j));
    }
  }
  Matrix acc = Matrix::Zero(nb, nb);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int bk = blocks.row_block[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m; ++j) {
      const int bl = blocks.col_block[static_cast<std::size_t>(j)];
      if (bk != bl && top(bk, bl) > kNegInf) acc(bk, bl) += std::exp(s.log_mass(i, j) - top(bk, bl));
    }
  }
  double scale = kNegInf;
  Matrix log_flow = Matrix::Constant(nb, nb, kNegInf);
  for (int k = 0; k < nb; ++k)
    for (int l = 0; l < nb; ++l)
      if (k != l && top(k, l) > kNegInf) {
        log_flow(k, l) = top(k, l) + std::log(acc(k, l));
        scale = std::max(scale, log_flow(k, l));
      }
  if (!(scale > kNegInf) || -scale > 700.0) return 0.0;

  std::vector<long double> excess(static_cast<std::size_t>(nb), 0.0L);
  for (Eigen::Index i = 0; i < n; ++i)
    excess[static_cast<std::size_t>(blocks.row_block[static_cast<std::size_t>(i)])] +=
        s.mu[static_cast<std::size_t>(i)];
  for (Eigen::Index j = 0; j < m; ++j)
    excess[static_cast<std::size_t>(blocks.col_block[static_cast<std::size_t>(j)])] -=
        s.nu[static_cast<std::size_t>(j)];

  Matrix flow(nb, nb);
  for (int k = 0; k < nb; ++k)
    for (int l = 0; l < nb; ++l) flow(k, l) = k == l ? 0.0 : std::exp(log_flow(k, l) - scale);
  std::vector<double> target(static_cast<std::size_t>(nb));
  const double unscale = std::exp(-scale);
  for (int k = 0; k < nb; ++k)
    target[static_cast<std::size_t>(k)] = static_cast<double>(excess[static_cast<std::size_t>(k)]) * unscale;

  // Minimize phi(t) = sum_{K != L} F_KL exp(t_K - t_L) - sum_K target_K t_K, with t_last = 0.
  std::vector<double> t(static_cast<std::size_t>(nb), 0.0);
  auto evaluate = [&](const std::vector<double>& tt, Matrix* e) {
    double phi = 0.0;
    for (int k = 0; k < nb; ++k) {
      phi -= target[static_cast<std::size_t>(k)] * tt[static_cast<std::size_t>(k)];
      for (int l = 0; l < nb; ++l) {
        if (k == l) continue;
        const double v = flow(k, l) * std::exp(tt[static_cast<std::size_t>(k)] - tt[static_cast<std::size_t>(l)]);
        if (e) (*e)(k, l) = v;
        phi += v;
      }
    }
    return phi;
  };

  Matrix e = Matrix::Zero(nb, nb);
  for (int iter = 0; iter < 200; ++iter) {
    const double phi = evaluate(t, &e);
    std::vector<double> neg_grad(static_cast<std::size_t>(nb));
    Matrix w(nb, nb);
    for (int k = 0; k < nb; ++k) {
      double g = -target[static_cast<std::size_t>(k)];
      for (int l = 0; l < nb; ++l) {
        if (k == l) {
          w(k, l) = 0.0;
          continue;
        }
        g += e(k, l) - e(l, k);
        w(k, l) = e(k, l) + e(l, k);
      }
      neg_grad[static_cast<std::size_t>(k)] = -g;
    }
    auto step = solve_grounded_laplacian(w, neg_grad);
    double len = 0.0;
    for (double v : step) len = std::max(len, std::abs(v));
    if (!std::isfinite(len)) break;
    if (len > 2.0)
      for (double& v : step) v *= 2.0 / len;
    double alpha = 1.0;
    if (len > 1e-8) {
      for (int ls = 0; ls < 60; ++ls) {
        std::vector<double> trial = t;
        for (std::size_t k = 0; k < trial.size(); ++k) trial[k] += alpha * step[k];
        if (evaluate(trial, nullptr) <= phi) break;
        alpha *= 0.5;
      }
    }
    for (std::size_t k = 0; k < t.size(); ++k) t[k] += alpha * step[k];
    if (alpha * std::min(len, 2.0) < 1e-15) break;
  }

  for (Eigen::Index i = 0; i < n; ++i)
    s.a[static_cast<std::size_t>(i)] += t[static_cast<std::size_t>(blocks.row_block[static_cast<std::size_t>(i)])];
  for (Eigen::Index j = 0; j < m; ++j)
    s.b[static_cast<std::size_t>(j)] -= t[static_cast<std::size_t>(blocks.col_block[static_cast<std::size_t>(j)])];
  const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
  return *hi - *lo;
}

}  // namespace ldot::detail
