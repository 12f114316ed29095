#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bjns/common.hpp"
#include "bjns/model.hpp"

namespace bjns {

// A generated truth: the component family, the per-edge category (as a
// group bitmask, 0 = absent) and value, and the positive-definite group
// precision matrices the data are drawn from.
struct GroundTruth {
  ModelSpec spec;
  std::vector<std::uint32_t> edge_mask;   // row-major upper triangle
  std::vector<double> edge_value;
  std::vector<Eigen::MatrixXd> omega;     // per group, after PD repair
  int d_t = 0;                            // number of present edges

  std::uint32_t mask_at(int i, int j) const {
    return edge_mask[edge_index(i, j, spec.p)];
  }
};

struct Metrics {
  long tp = 0, tn = 0, fp = 0, fn = 0;
  double sp = 0.0, se = 0.0, mcc = 0.0;
};

// Banded matrix with unit diagonal, 0.5 on the first off-diagonal and 0.25
// on the second.
Eigen::MatrixXd gen_ar2(int p);

// Removes `remove_count` random present edges and adds `add_count` random
// absent ones with magnitudes uniform on +-[lo,hi].
struct PerturbResult {
  Eigen::MatrixXd matrix;
  std::vector<Edge> removed;
  std::vector<Edge> added;
};
PerturbResult perturb_graph(const Eigen::MatrixXd& base, int remove_count,
                            int add_count, double lo, double hi, Rng& rng);

// Ensures eig_min >= target by shifting the diagonal; the off-diagonal
// support is untouched.
Eigen::MatrixXd condition_pd(const Eigen::MatrixXd& matrix, double min_eig_target);

// K groups sharing one all-group component: each group holds
// round(density * E * shared_fraction) shared edges plus disjoint unique
// ones, values uniform on +-[0.4,0.6]. `sparsity` is the zero share, e.g.
// 0.95 for 5% density.
GroundTruth gen_random_shared(int p, double sparsity, double shared_fraction,
                              int K, Rng& rng);

// Four chains with progressively less sharing: group 1 is the AR(2) band;
// group 2 swaps a quarter of it for fresh edges; group 3 keeps only part of
// the 1-2 overlap plus fresh edges; group 4 shares nothing. True family:
// singletons + {1,2} + {1,2,3}.
GroundTruth gen_ar2_chain_k4(int p, Rng& rng);

// Six groups arranged in a 3x2 grid: pair components {12},{34},{56} hold
// the edges touching the first half of the variables, triple components
// {135},{246} hold the bottom-right block. 92% sparse per group.
GroundTruth gen_block_k6(int p, Rng& rng);

// n_per_group[k] zero-mean Gaussian rows per group with covariance
// omega^{-1}.
std::vector<Eigen::MatrixXd> sample_groups(const GroundTruth& truth,
                                           const std::vector<long>& n_per_group,
                                           Rng& rng);

// Confusion counts over the upper triangle, with SP = TN/(TN+FP),
// SE = TP/(TP+FN) and the Matthews coefficient; a zero MCC denominator
// yields 0, and SP/SE with an empty denominator are vacuously 1.
Metrics score_pattern(const std::vector<bool>& predicted,
                      const std::vector<bool>& truth);

// Presence patterns for the two kinds of score targets.
std::vector<bool> omega_presence(const std::vector<std::uint32_t>& masks, int k);
std::vector<bool> component_presence(const std::vector<std::uint32_t>& masks,
                                     std::uint32_t component_mask);

}  // namespace bjns
