#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bjns/common.hpp"
#include "bjns/model.hpp"

namespace bjns {

// Per-group sample sizes and covariances S^k = (1/n_k) Y'Y.
struct GroupStats {
  std::vector<long> n;               // sample size per group
  std::vector<Eigen::MatrixXd> S;    // p x p covariance per group

  int K() const { return static_cast<int>(S.size()); }
  int p() const { return S.empty() ? 0 : static_cast<int>(S.front().rows()); }
  double mean_n() const;
};

// Divisor is n_k (not n_k - 1), matching the n-scaling of the
// pseudo-likelihood. Centering is optional: on for real data, off for
// synthetic mean-zero draws.
GroupStats compute_group_stats(const std::vector<Eigen::MatrixXd>& data,
                               bool center);

// Maintains T^k = S^k * Omega^k for the current (theta, delta) state. The
// Gibbs kernel reads all its inner products from these matrices and updates
// them incrementally in O(p) per changed entry; the big quadratic-form
// matrix is never materialized in this path.
//
// Version discipline: mutate the states through their setters and mirror
// every mutation with apply_theta_update / apply_diag_update. Readers check
// that the recorded versions match the states and throw InternalError on a
// stale cache.
class QuadFormCache {
 public:
  QuadFormCache(const GroupStats& stats, const ModelSpec& spec,
                const ThetaState& theta, const DiagState& delta);

  // Omega^k_{:i}' S^k_{:j} + Omega^k_{:j}' S^k_{:i} at the current state,
  // read as T^k(j,i) + T^k(i,j). Includes the edge's own contribution.
  double residual_inner(const ThetaState& theta, const DiagState& delta,
                        int k, int i, int j) const;

  // Sum_{k in r} (s^k_ii + s^k_jj): the diagonal of the quadratic-form
  // matrix for component r at edge (i,j), unweighted by sample size.
  double upsilon_diag(int component, int i, int j) const;

  // Same sum with each group's term weighted by w(k) (the sampler passes
  // n_k).
  double upsilon_diag_weighted(int component, int i, int j) const;

  // Sum_{j != i} omega^k_ij s^k_ij, read as T^k(i,i) minus the diagonal's
  // own term.
  double offdiag_inner(const ThetaState& theta, const DiagState& delta,
                       int k, int i) const;

  void apply_theta_update(int i, int j, const EdgeCoefficients& oldc,
                          const EdgeCoefficients& newc);
  void apply_diag_update(int k, int i, double oldv, double newv);

  // Rebuilds every T^k from scratch (bounds incremental drift; the chain
  // calls this every refresh_every sweeps).
  void refresh(const ThetaState& theta, const DiagState& delta);

  // Max |T - fresh T| over all groups; test hook for the drift invariant.
  double drift(const ThetaState& theta, const DiagState& delta) const;

  const GroupStats& stats() const { return *stats_; }
  const ModelSpec& spec() const { return *spec_; }
  const Eigen::MatrixXd& T(int k) const { return T_[k]; }

 private:
  void check_sync(const ThetaState& theta, const DiagState& delta) const;
  Eigen::MatrixXd build(const ThetaState& theta, const DiagState& delta,
                        int k) const;

  const GroupStats* stats_;
  const ModelSpec* spec_;
  std::vector<Eigen::MatrixXd> T_;
  std::uint64_t theta_version_;
  std::uint64_t delta_version_;
};

}  // namespace bjns
