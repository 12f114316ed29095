#include "bjns/screening.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bjns {

namespace {

// Majority-vote edge count of every component in the fit's family.
std::vector<int> component_edge_counts(const FitResult& fit) {
  std::vector<int> counts(fit.spec.n_components(), 0);
  for (const EdgeFit& e : fit.edges)
    if (e.selected != kAbsent) ++counts[e.selected];
  return counts;
}

FitResult fit_spec(const GroupStats& stats, const ModelSpec& spec,
                   const ChainConfig& chain, const ShrinkageHyper& hyper,
                   const PriorConfig& prior, std::uint64_t chain_index) {
  const SelectionTrace trace =
      run_chain(stats, spec, chain, hyper, prior, nullptr, chain_index);
  return majority_vote(trace);
}

// All subsets of {1..K} with >= 3 members whose internal pairs are all in
// `active_pairs` (cliques of the active-pair graph).
std::vector<GroupSet> clique_supersets(const std::vector<GroupSet>& active_pairs,
                                       int K) {
  std::vector<std::vector<bool>> adj(K + 1, std::vector<bool>(K + 1, false));
  for (GroupSet pair : active_pairs) {
    const std::vector<int> m = pair.members();
    adj[m[0]][m[1]] = adj[m[1]][m[0]] = true;
  }
  std::vector<GroupSet> out;
  std::vector<int> clique;
  auto extend = [&](auto&& self, int next) -> void {
    if (static_cast<int>(clique.size()) >= 3) {
      std::uint32_t mask = 0;
      for (int k : clique) mask |= 1u << (k - 1);
      out.push_back(GroupSet(mask));
    }
    for (int k = next; k <= K; ++k) {
      bool ok = true;
      for (int c : clique)
        if (!adj[c][k]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      clique.push_back(k);
      self(self, k + 1);
      clique.pop_back();
    }
  };
  extend(extend, 1);
  return out;
}

}  // namespace

std::vector<ScreenEntry> ScreenReport::at_stage(const std::string& stage) const {
  std::vector<ScreenEntry> out;
  for (const ScreenEntry& e : entries)
    if (e.stage == stage) out.push_back(e);
  return out;
}

ScreenReport pairwise_screen(const GroupStats& stats, const ScreenConfig& cfg) {
  const int K = stats.K();
  if (K < 3) throw InvalidArgument("pairwise_screen: needs K >= 3");

  std::vector<std::pair<int, int>> pairs;
  for (int k1 = 1; k1 < K; ++k1)
    for (int k2 = k1 + 1; k2 <= K; ++k2) pairs.emplace_back(k1, k2);

  const ModelSpec pair_spec = ModelSpec::full(2, stats.p());
  std::vector<int> counts(pairs.size(), 0);

#ifdef _OPENMP
  const int threads = std::max(1, cfg.jobs);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (long job = 0; job < static_cast<long>(pairs.size()); ++job) {
    const auto [k1, k2] = pairs[job];
    GroupStats sub;
    sub.n = {stats.n[k1 - 1], stats.n[k2 - 1]};
    sub.S = {stats.S[k1 - 1], stats.S[k2 - 1]};
    const FitResult fit =
        fit_spec(sub, pair_spec, cfg.pairwise_chain, cfg.hyper, cfg.prior,
                 static_cast<std::uint64_t>(job));
    // Local component {1,2} sits first in the canonical pair family.
    counts[job] = component_edge_counts(fit)[0];
  }

  ScreenReport report;
  for (std::size_t job = 0; job < pairs.size(); ++job)
    report.entries.push_back(ScreenEntry{
        GroupSet::of({pairs[job].first, pairs[job].second}), counts[job], true,
        "pairwise"});
  return report;
}

PruneResult prune_components(ScreenReport& report, double alpha, int K, int p) {
  std::vector<ScreenEntry*> pairwise;
  int max_count = 0;
  for (ScreenEntry& e : report.entries) {
    if (e.stage != "pairwise") continue;
    pairwise.push_back(&e);
    max_count = std::max(max_count, e.edge_count);
  }
  if (pairwise.empty())
    throw InvalidArgument("prune_components: report has no pairwise stage");

  PruneResult out;
  std::vector<GroupSet> active_pairs;
  for (ScreenEntry* e : pairwise) {
    e->active = e->edge_count >= alpha * max_count;
    (e->active ? active_pairs : out.inactive_pairs).push_back(e->component);
  }

  std::vector<GroupSet> family;
  for (int k = 1; k <= K; ++k) family.push_back(GroupSet::singleton(k));
  for (GroupSet pair : active_pairs) family.push_back(pair);
  for (GroupSet sup : clique_supersets(active_pairs, K)) family.push_back(sup);
  out.spec = ModelSpec::make(K, p, family);
  return out;
}

ScreenResult iterative_reduce(const GroupStats& stats, const ScreenConfig& cfg) {
  if (cfg.max_rounds < 1)
    throw InvalidArgument("iterative_reduce: max_rounds must be >= 1");

  ScreenResult result;
  result.report = pairwise_screen(stats, cfg);
  PruneResult pruned = prune_components(result.report, cfg.alpha, stats.K(),
                                        stats.p());
  result.inactive_pairs = pruned.inactive_pairs;
  ModelSpec spec = pruned.spec;

  for (int round = 1; round <= cfg.max_rounds; ++round) {
    const FitResult fit = fit_spec(stats, spec, cfg.pairwise_chain, cfg.hyper,
                                   cfg.prior, 1000 + round);
    const std::vector<int> counts = component_edge_counts(fit);
    int max_joint = 0;
    for (int c = 0; c < spec.n_components(); ++c)
      if (spec.components[c].cardinality() > 1)
        max_joint = std::max(max_joint, counts[c]);

    std::vector<GroupSet> kept;
    bool removed_any = false;
    const std::string stage = "reduced-" + std::to_string(round);
    for (int c = 0; c < spec.n_components(); ++c) {
      const bool joint = spec.components[c].cardinality() > 1;
      const bool active = !joint || counts[c] >= cfg.alpha * max_joint;
      if (joint)
        result.report.entries.push_back(
            ScreenEntry{spec.components[c], counts[c], active, stage});
      if (active)
        kept.push_back(spec.components[c]);
      else
        removed_any = true;
    }
    spec = ModelSpec::make(stats.K(), stats.p(), kept);
    if (!removed_any) break;
  }

  result.final_spec = spec;
  result.final_fit =
      fit_spec(stats, spec, cfg.chain, cfg.hyper, cfg.prior, 0);
  const std::vector<int> final_counts = component_edge_counts(result.final_fit);
  for (int c = 0; c < spec.n_components(); ++c)
    if (spec.components[c].cardinality() > 1)
      result.report.entries.push_back(ScreenEntry{
          spec.components[c], final_counts[c], true, "final"});
  return result;
}

}  // namespace bjns
