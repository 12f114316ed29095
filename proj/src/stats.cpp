#include "bjns/stats.hpp"

#include <cmath>

#include "bjns/kernels.hpp"

namespace bjns {

double GroupStats::mean_n() const {
  double acc = 0.0;
  for (long nk : n) acc += static_cast<double>(nk);
  return n.empty() ? 0.0 : acc / static_cast<double>(n.size());
}

GroupStats compute_group_stats(const std::vector<Eigen::MatrixXd>& data,
                               bool center) {
  if (data.empty()) throw InvalidArgument("compute_group_stats: no groups");
  const long p = data.front().cols();
  GroupStats stats;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const Eigen::MatrixXd& Y = data[k];
    if (Y.cols() != p)
      throw InvalidArgument("compute_group_stats: group " + std::to_string(k + 1) +
                            " has " + std::to_string(Y.cols()) +
                            " variables, expected " + std::to_string(p));
    if (Y.rows() < 2)
      throw InvalidArgument("compute_group_stats: group " + std::to_string(k + 1) +
                            " has fewer than 2 observations");
    stats.n.push_back(Y.rows());
    stats.S.push_back(kernels::covariance(Y, center));
  }
  return stats;
}

QuadFormCache::QuadFormCache(const GroupStats& stats, const ModelSpec& spec,
                             const ThetaState& theta, const DiagState& delta)
    : stats_(&stats), spec_(&spec) {
  if (stats.K() != spec.K)
    throw InvalidArgument("QuadFormCache: stats have " + std::to_string(stats.K()) +
                          " groups, spec has " + std::to_string(spec.K));
  if (stats.p() != spec.p)
    throw InvalidArgument("QuadFormCache: stats have p=" + std::to_string(stats.p()) +
                          ", spec has p=" + std::to_string(spec.p));
  refresh(theta, delta);
}

Eigen::MatrixXd QuadFormCache::build(const ThetaState& theta,
                                     const DiagState& delta, int k) const {
  const int p = spec_->p;
  std::vector<kernels::EdgeEntry> edges;
  for (int i = 0; i < p - 1; ++i) {
    for (int j = i + 1; j < p; ++j) {
      const EdgeCoefficients& e = theta.edge(i, j);
      if (!e.absent() && spec_->components[e.active_component].contains(k + 1))
        edges.push_back({i, j, e.value});
    }
  }
  return kernels::product_cache(stats_->S[k], delta.matrix().row(k), edges);
}

void QuadFormCache::refresh(const ThetaState& theta, const DiagState& delta) {
  T_.resize(spec_->K);
  for (int k = 0; k < spec_->K; ++k) T_[k] = build(theta, delta, k);
  theta_version_ = theta.version();
  delta_version_ = delta.version();
}

double QuadFormCache::drift(const ThetaState& theta,
                            const DiagState& delta) const {
  double worst = 0.0;
  for (int k = 0; k < spec_->K; ++k)
    worst = std::max(worst, (T_[k] - build(theta, delta, k)).cwiseAbs().maxCoeff());
  return worst;
}

void QuadFormCache::check_sync(const ThetaState& theta,
                               const DiagState& delta) const {
  if (theta.version() != theta_version_ || delta.version() != delta_version_)
    throw InternalError("QuadFormCache: cache is stale relative to the state");
}

double QuadFormCache::residual_inner(const ThetaState& theta,
                                     const DiagState& delta, int k, int i,
                                     int j) const {
  check_sync(theta, delta);
  return T_[k](j, i) + T_[k](i, j);
}

double QuadFormCache::upsilon_diag(int component, int i, int j) const {
  double acc = 0.0;
  for (int k : spec_->components[component].members())
    acc += stats_->S[k - 1](i, i) + stats_->S[k - 1](j, j);
  return acc;
}

double QuadFormCache::upsilon_diag_weighted(int component, int i, int j) const {
  double acc = 0.0;
  for (int k : spec_->components[component].members())
    acc += static_cast<double>(stats_->n[k - 1]) *
           (stats_->S[k - 1](i, i) + stats_->S[k - 1](j, j));
  return acc;
}

double QuadFormCache::offdiag_inner(const ThetaState& theta,
                                    const DiagState& delta, int k, int i) const {
  check_sync(theta, delta);
  return T_[k](i, i) - delta.get(k, i) * stats_->S[k](i, i);
}

void QuadFormCache::apply_theta_update(int i, int j,
                                       const EdgeCoefficients& oldc,
                                       const EdgeCoefficients& newc) {
  ++theta_version_;
  if (oldc == newc) return;
  for (int k = 0; k < spec_->K; ++k) {
    const double oldv =
        (!oldc.absent() && spec_->components[oldc.active_component].contains(k + 1))
            ? oldc.value
            : 0.0;
    const double newv =
        (!newc.absent() && spec_->components[newc.active_component].contains(k + 1))
            ? newc.value
            : 0.0;
    const double d = newv - oldv;
    if (d == 0.0) continue;
    T_[k].col(j) += d * stats_->S[k].col(i);
    T_[k].col(i) += d * stats_->S[k].col(j);
  }
}

void QuadFormCache::apply_diag_update(int k, int i, double oldv, double newv) {
  ++delta_version_;
  const double d = newv - oldv;
  if (d == 0.0) return;
  T_[k].col(i) += d * stats_->S[k].col(i);
}

}  // namespace bjns
