#pragma once

#include <Eigen/Dense>

namespace bjns::kernels {

// S = (1/n) Y'Y, optionally after column-centering. The OpenMP variant
// splits the upper triangle of the output across threads; every entry is
// written by exactly one thread with a fixed-order inner loop, so results
// are identical for any thread count.
Eigen::MatrixXd covariance(const Eigen::MatrixXd& data, bool center);

// T = S * Omega for a sparse symmetric Omega given as (diag, edge list).
// Cost O(p^2 + d*p); the dense reference below is O(p^3).
struct EdgeEntry {
  int i;
  int j;
  double value;
};
Eigen::MatrixXd product_cache(const Eigen::MatrixXd& S,
                              const Eigen::VectorXd& diag,
                              const std::vector<EdgeEntry>& edges);

// Unnormalized grid weights exp{n log t - (n/2) s t^2 - b t} relative to
// the mode's weight, evaluated in parallel over grid points.
void diag_grid_weights(double n, double s_ii, double b, double log_w_mode,
                       const std::vector<double>& grid,
                       std::vector<double>& weights);

// Plain serial loops, kept as the reference the parallel kernels are tested
// and benchmarked against.
namespace serial {
Eigen::MatrixXd covariance(const Eigen::MatrixXd& data, bool center);
Eigen::MatrixXd product_cache(const Eigen::MatrixXd& S,
                              const Eigen::VectorXd& diag,
                              const std::vector<EdgeEntry>& edges);
void diag_grid_weights(double n, double s_ii, double b, double log_w_mode,
                       const std::vector<double>& grid,
                       std::vector<double>& weights);
}  // namespace serial

}  // namespace bjns::kernels
