#pragma once

#include <Eigen/Dense>
#include <optional>

#include "bjns/model.hpp"
#include "bjns/stats.hpp"

namespace bjns {

// Dense realization of the quadratic form
//   sum_k w_k tr[(Omega^k)^2 S^k] = Theta' Upsilon Theta + 2 Theta' A Delta
//                                   + Delta' D Delta,
// with a = A Delta. Theta is laid out component-block major (components in
// canonical order), each block holding the p(p-1)/2 edges in row-major
// upper-triangle order; Delta is group-major (k, then i).
//
// With unit weights this is the textbook identity; the exact-posterior and
// small-instance tests weight each group's block by n_k. Test-scale only:
// refuses p > 50 or more than 15 components.
struct DenseQuadForm {
  Eigen::MatrixXd upsilon;  // E*C x E*C, E = p(p-1)/2, C = n_components
  Eigen::MatrixXd A;        // E*C x K*p
  Eigen::MatrixXd D;        // K*p x K*p diagonal (stored dense)
  Eigen::VectorXd a;        // E*C, equals A * Delta for the given delta

  int p = 0;
  int E = 0;
  int C = 0;
  int K = 0;

  int theta_index(int component, int i, int j) const {
    return component * E + edge_index(i, j, p);
  }
  int delta_index(int k, int i) const { return k * p + i; }

  // Flattened state vectors in this layout.
  Eigen::VectorXd theta_vector(const ThetaState& theta) const;
  Eigen::VectorXd delta_vector(const DiagState& delta) const;

  double quadratic(const Eigen::VectorXd& theta_vec,
                   const Eigen::VectorXd& delta_vec) const;
};

DenseQuadForm materialize_oracle(
    const GroupStats& stats, const ModelSpec& spec, const DiagState& delta,
    std::optional<Eigen::VectorXd> group_weights = std::nullopt);

// The per-group building block B^k: square over edges, with
//   B[(ab),(ab)] = s_aa + s_bb,
//   B[(ab),(cd)] = s_xy  when the pairs share one index and {x,y} are the
//                  two non-shared ones,
//   B[(ab),(cd)] = 0     when the pairs are disjoint.
Eigen::MatrixXd dense_B(const Eigen::MatrixXd& S);

}  // namespace bjns
