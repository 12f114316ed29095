#include "bjns/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bjns {

namespace {

constexpr double kMinEigTarget = 0.1;

double draw_magnitude(double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::bernoulli_distribution sign(0.5);
  const double m = mag(rng);
  return sign(rng) ? m : -m;
}

// k distinct picks from `pool`, consumed from the shuffled front.
std::vector<int> draw_without_replacement(std::vector<int>& pool, int k,
                                          Rng& rng) {
  if (k > static_cast<int>(pool.size()))
    throw InvalidArgument("synthetic: not enough free edge slots");
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<int> out(pool.begin(), pool.begin() + k);
  pool.erase(pool.begin(), pool.begin() + k);
  return out;
}

// Builds the per-group matrices from the edge categories, applies the PD
// repair and fills d_t.
void finalize_truth(GroundTruth& truth) {
  const ModelSpec& spec = truth.spec;
  const int p = spec.p;
  truth.d_t = 0;
  for (std::uint32_t m : truth.edge_mask)
    if (m != 0) ++truth.d_t;
  truth.omega.clear();
  for (int k = 1; k <= spec.K; ++k) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Identity(p, p);
    for (int e = 0; e < edge_count(p); ++e) {
      if (truth.edge_mask[e] == 0) continue;
      if (!GroupSet(truth.edge_mask[e]).contains(k)) continue;
      const Edge ij = edge_at(e, p);
      omega(ij.i, ij.j) = truth.edge_value[e];
      omega(ij.j, ij.i) = truth.edge_value[e];
    }
    truth.omega.push_back(condition_pd(omega, kMinEigTarget));
  }
}

}  // namespace

Eigen::MatrixXd gen_ar2(int p) {
  if (p < 3) throw InvalidArgument("gen_ar2: p must be >= 3");
  Eigen::MatrixXd omega = Eigen::MatrixXd::Identity(p, p);
  for (int j = 0; j + 1 < p; ++j) omega(j, j + 1) = omega(j + 1, j) = 0.5;
  for (int j = 0; j + 2 < p; ++j) omega(j, j + 2) = omega(j + 2, j) = 0.25;
  return omega;
}

PerturbResult perturb_graph(const Eigen::MatrixXd& base, int remove_count,
                            int add_count, double lo, double hi, Rng& rng) {
  const int p = static_cast<int>(base.rows());
  std::vector<int> present, absent;
  for (int e = 0; e < edge_count(p); ++e) {
    const Edge ij = edge_at(e, p);
    (base(ij.i, ij.j) != 0.0 ? present : absent).push_back(e);
  }
  if (remove_count < 0 || add_count < 0 ||
      remove_count > static_cast<int>(present.size()) ||
      add_count > static_cast<int>(absent.size()))
    throw InvalidArgument("perturb_graph: infeasible remove/add counts");

  PerturbResult out;
  out.matrix = base;
  for (int e : draw_without_replacement(present, remove_count, rng)) {
    const Edge ij = edge_at(e, p);
    out.matrix(ij.i, ij.j) = out.matrix(ij.j, ij.i) = 0.0;
    out.removed.push_back(ij);
  }
  for (int e : draw_without_replacement(absent, add_count, rng)) {
    const Edge ij = edge_at(e, p);
    const double v = draw_magnitude(lo, hi, rng);
    out.matrix(ij.i, ij.j) = out.matrix(ij.j, ij.i) = v;
    out.added.push_back(ij);
  }
  return out;
}

Eigen::MatrixXd condition_pd(const Eigen::MatrixXd& matrix,
                             double min_eig_target) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(matrix,
                                                     Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig >= min_eig_target) return matrix;
  return matrix + (min_eig_target - min_eig) *
                      Eigen::MatrixXd::Identity(matrix.rows(), matrix.cols());
}

GroundTruth gen_random_shared(int p, double sparsity, double shared_fraction,
                              int K, Rng& rng) {
  if (!(sparsity > 0.0 && sparsity < 1.0))
    throw InvalidArgument("gen_random_shared: sparsity must be in (0,1)");
  if (!(shared_fraction >= 0.0 && shared_fraction <= 1.0))
    throw InvalidArgument("gen_random_shared: shared_fraction must be in [0,1]");

  const int E = edge_count(p);
  const int per_group = static_cast<int>(std::lround((1.0 - sparsity) * E));
  const int shared = static_cast<int>(std::lround(shared_fraction * per_group));
  const int unique = per_group - shared;

  std::vector<GroupSet> family;
  for (int k = 1; k <= K; ++k) family.push_back(GroupSet::singleton(k));
  std::uint32_t all_mask = (1u << K) - 1;
  if (K > 1) family.push_back(GroupSet(all_mask));

  GroundTruth truth;
  truth.spec = ModelSpec::make(K, p, family);
  truth.edge_mask.assign(E, 0);
  truth.edge_value.assign(E, 0.0);

  std::vector<int> pool(E);
  std::iota(pool.begin(), pool.end(), 0);
  for (int e : draw_without_replacement(pool, shared, rng)) {
    truth.edge_mask[e] = all_mask;
    truth.edge_value[e] = draw_magnitude(0.4, 0.6, rng);
  }
  for (int k = 1; k <= K; ++k) {
    for (int e : draw_without_replacement(pool, unique, rng)) {
      truth.edge_mask[e] = GroupSet::singleton(k).mask();
      truth.edge_value[e] = draw_magnitude(0.4, 0.6, rng);
    }
  }
  finalize_truth(truth);
  return truth;
}

GroundTruth gen_ar2_chain_k4(int p, Rng& rng) {
  const int E = edge_count(p);
  const Eigen::MatrixXd ar2 = gen_ar2(p);

  std::vector<int> band;  // the 2p-3 AR(2) edges
  std::vector<int> free_slots;
  for (int e = 0; e < E; ++e) {
    const Edge ij = edge_at(e, p);
    (ar2(ij.i, ij.j) != 0.0 ? band : free_slots).push_back(e);
  }

  const int quarter = static_cast<int>(std::lround(p / 4.0));
  const int half = static_cast<int>(std::lround(p / 2.0));
  const int rest = static_cast<int>(band.size()) - quarter - half;
  if (rest <= 0)
    throw InvalidArgument("gen_ar2_chain_k4: p too small for the edge budget");

  std::vector<GroupSet> family;
  for (int k = 1; k <= 4; ++k) family.push_back(GroupSet::singleton(k));
  family.push_back(GroupSet::of({1, 2}));
  family.push_back(GroupSet::of({1, 2, 3}));

  GroundTruth truth;
  truth.spec = ModelSpec::make(4, p, family);
  truth.edge_mask.assign(E, 0);
  truth.edge_value.assign(E, 0.0);

  auto assign = [&](const std::vector<int>& edges, GroupSet cat, bool ar_value) {
    for (int e : edges) {
      const Edge ij = edge_at(e, p);
      truth.edge_mask[e] = cat.mask();
      truth.edge_value[e] =
          ar_value ? ar2(ij.i, ij.j) : draw_magnitude(0.4, 0.6, rng);
    }
  };

  // Band edges dropped when building group 2 stay unique to group 1; the
  // survivors keep their AR(2) values wherever they are shared.
  std::vector<int> band_pool = band;
  assign(draw_without_replacement(band_pool, quarter, rng),
         GroupSet::singleton(1), true);
  assign(draw_without_replacement(band_pool, half, rng), GroupSet::of({1, 2}),
         true);
  assign(band_pool, GroupSet::of({1, 2, 3}), true);  // the remaining overlap

  assign(draw_without_replacement(free_slots, quarter, rng),
         GroupSet::singleton(2), false);
  assign(draw_without_replacement(free_slots, half, rng),
         GroupSet::singleton(3), false);
  assign(draw_without_replacement(free_slots, rest, rng),
         GroupSet::singleton(4), false);

  finalize_truth(truth);
  return truth;
}

GroundTruth gen_block_k6(int p, Rng& rng) {
  if (p % 2 != 0) throw InvalidArgument("gen_block_k6: p must be even");
  const int E = edge_count(p);
  const int half = p / 2;

  std::vector<int> block, outside;  // bottom-right block vs the rest
  for (int e = 0; e < E; ++e) {
    const Edge ij = edge_at(e, p);
    (ij.i >= half ? block : outside).push_back(e);
  }
  const double density = 0.08;
  const int n_outside = static_cast<int>(
      std::lround(density * static_cast<double>(outside.size())));
  const int n_block = static_cast<int>(
      std::lround(density * static_cast<double>(block.size())));

  std::vector<GroupSet> family;
  for (int k = 1; k <= 6; ++k) family.push_back(GroupSet::singleton(k));
  const std::vector<GroupSet> pairs = {GroupSet::of({1, 2}), GroupSet::of({3, 4}),
                                       GroupSet::of({5, 6})};
  const std::vector<GroupSet> triples = {GroupSet::of({1, 3, 5}),
                                         GroupSet::of({2, 4, 6})};
  for (GroupSet c : pairs) family.push_back(c);
  for (GroupSet c : triples) family.push_back(c);

  GroundTruth truth;
  truth.spec = ModelSpec::make(6, p, family);
  truth.edge_mask.assign(E, 0);
  truth.edge_value.assign(E, 0.0);

  for (GroupSet cat : pairs) {
    for (int e : draw_without_replacement(outside, n_outside, rng)) {
      truth.edge_mask[e] = cat.mask();
      truth.edge_value[e] = draw_magnitude(0.4, 0.6, rng);
    }
  }
  for (GroupSet cat : triples) {
    for (int e : draw_without_replacement(block, n_block, rng)) {
      truth.edge_mask[e] = cat.mask();
      truth.edge_value[e] = draw_magnitude(0.4, 0.6, rng);
    }
  }
  finalize_truth(truth);
  return truth;
}

std::vector<Eigen::MatrixXd> sample_groups(const GroundTruth& truth,
                                           const std::vector<long>& n_per_group,
                                           Rng& rng) {
  if (static_cast<int>(n_per_group.size()) != truth.spec.K)
    throw InvalidArgument("sample_groups: one sample size per group required");
  const int p = truth.spec.p;
  std::vector<Eigen::MatrixXd> data;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < truth.spec.K; ++k) {
    Eigen::LLT<Eigen::MatrixXd> llt(truth.omega[k]);
    if (llt.info() != Eigen::Success)
      throw InvalidArgument("sample_groups: omega is not positive definite");
    // omega = L L'; rows y = L'^{-1} z have covariance omega^{-1}.
    Eigen::MatrixXd Y(n_per_group[k], p);
    Eigen::VectorXd z(p);
    for (long r = 0; r < n_per_group[k]; ++r) {
      for (int c = 0; c < p; ++c) z(c) = normal(rng);
      Y.row(r) = llt.matrixU().solve(z).transpose();
    }
    data.push_back(std::move(Y));
  }
  return data;
}

Metrics score_pattern(const std::vector<bool>& predicted,
                      const std::vector<bool>& truth) {
  if (predicted.size() != truth.size())
    throw InvalidArgument("score_pattern: pattern lengths differ");
  Metrics m;
  for (std::size_t e = 0; e < truth.size(); ++e) {
    if (predicted[e] && truth[e]) ++m.tp;
    else if (!predicted[e] && !truth[e]) ++m.tn;
    else if (predicted[e]) ++m.fp;
    else ++m.fn;
  }
  m.sp = (m.tn + m.fp == 0) ? 1.0
                            : static_cast<double>(m.tn) /
                                  static_cast<double>(m.tn + m.fp);
  m.se = (m.tp + m.fn == 0) ? 1.0
                            : static_cast<double>(m.tp) /
                                  static_cast<double>(m.tp + m.fn);
  const double denom =
      std::sqrt(static_cast<double>(m.tp + m.fp)) *
      std::sqrt(static_cast<double>(m.tp + m.fn)) *
      std::sqrt(static_cast<double>(m.tn + m.fp)) *
      std::sqrt(static_cast<double>(m.tn + m.fn));
  m.mcc = (denom == 0.0)
              ? 0.0
              : (static_cast<double>(m.tp) * static_cast<double>(m.tn) -
                 static_cast<double>(m.fp) * static_cast<double>(m.fn)) /
                    denom;
  return m;
}

std::vector<bool> omega_presence(const std::vector<std::uint32_t>& masks, int k) {
  std::vector<bool> out(masks.size());
  for (std::size_t e = 0; e < masks.size(); ++e)
    out[e] = GroupSet(masks[e]).contains(k);
  return out;
}

std::vector<bool> component_presence(const std::vector<std::uint32_t>& masks,
                                     std::uint32_t component_mask) {
  std::vector<bool> out(masks.size());
  for (std::size_t e = 0; e < masks.size(); ++e)
    out[e] = masks[e] == component_mask;
  return out;
}

}  // namespace bjns
