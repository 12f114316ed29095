#include "bjns/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bjns::kernels {

namespace serial {

Eigen::MatrixXd covariance(const Eigen::MatrixXd& data, bool center) {
  const long n = data.rows();
  const long p = data.cols();
  Eigen::MatrixXd Y = data;
  if (center) Y.rowwise() -= Y.colwise().mean();
  Eigen::MatrixXd S(p, p);
  for (long a = 0; a < p; ++a) {
    for (long b = a; b < p; ++b) {
      double acc = 0.0;
      for (long r = 0; r < n; ++r) acc += Y(r, a) * Y(r, b);
      S(a, b) = acc / static_cast<double>(n);
      S(b, a) = S(a, b);
    }
  }
  return S;
}

Eigen::MatrixXd product_cache(const Eigen::MatrixXd& S,
                              const Eigen::VectorXd& diag,
                              const std::vector<EdgeEntry>& edges) {
  const long p = S.rows();
  Eigen::MatrixXd T(p, p);
  for (long i = 0; i < p; ++i) T.col(i) = diag(i) * S.col(i);
  for (const EdgeEntry& e : edges) {
    T.col(e.j) += e.value * S.col(e.i);
    T.col(e.i) += e.value * S.col(e.j);
  }
  return T;
}

void diag_grid_weights(double n, double s_ii, double b, double log_w_mode,
                       const std::vector<double>& grid,
                       std::vector<double>& weights) {
  weights.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double t = grid[g];
    weights[g] = (t <= 0.0)
                     ? 0.0
                     : std::exp(n * std::log(t) - 0.5 * n * s_ii * t * t -
                                b * t - log_w_mode);
  }
}

}  // namespace serial

Eigen::MatrixXd covariance(const Eigen::MatrixXd& data, bool center) {
  const long n = data.rows();
  const long p = data.cols();
  Eigen::MatrixXd Y = data;
  if (center) Y.rowwise() -= Y.colwise().mean();
  Eigen::MatrixXd S(p, p);
#pragma omp parallel for schedule(dynamic, 4)
  for (long a = 0; a < p; ++a) {
    for (long b = a; b < p; ++b) {
      const double acc = Y.col(a).dot(Y.col(b));
      S(a, b) = acc / static_cast<double>(n);
      S(b, a) = S(a, b);
    }
  }
  return S;
}

Eigen::MatrixXd product_cache(const Eigen::MatrixXd& S,
                              const Eigen::VectorXd& diag,
                              const std::vector<EdgeEntry>& edges) {
  const long p = S.rows();
  // Bucket the axpy updates by destination column; each column is then
  // owned by one thread and accumulated in edge-list order, so the result
  // is independent of thread count.
  std::vector<std::vector<std::pair<int, double>>> by_col(p);
  for (const EdgeEntry& e : edges) {
    by_col[e.j].emplace_back(e.i, e.value);
    by_col[e.i].emplace_back(e.j, e.value);
  }
  Eigen::MatrixXd T(p, p);
#pragma omp parallel for schedule(static)
  for (long c = 0; c < p; ++c) {
    T.col(c) = diag(c) * S.col(c);
    for (const auto& [src, v] : by_col[c]) T.col(c) += v * S.col(src);
  }
  return T;
}

void diag_grid_weights(double n, double s_ii, double b, double log_w_mode,
                       const std::vector<double>& grid,
                       std::vector<double>& weights) {
  weights.resize(grid.size());
  const long G = static_cast<long>(grid.size());
#pragma omp parallel for schedule(static)
  for (long g = 0; g < G; ++g) {
    const double t = grid[g];
    weights[g] = (t <= 0.0)
                     ? 0.0
                     : std::exp(n * std::log(t) - 0.5 * n * s_ii * t * t -
                                b * t - log_w_mode);
  }
}

}  // namespace bjns::kernels
