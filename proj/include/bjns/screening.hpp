#pragma once

#include <string>
#include <vector>

#include "bjns/gibbs.hpp"
#include "bjns/inference.hpp"
#include "bjns/model.hpp"
#include "bjns/stats.hpp"

namespace bjns {

// One screened component: its majority-vote edge count at a given stage of
// the pipeline.
struct ScreenEntry {
  GroupSet component;
  int edge_count = 0;
  bool active = true;
  std::string stage;  // "pairwise" | "reduced-<round>" | "final"
};

struct ScreenReport {
  std::vector<ScreenEntry> entries;

  std::vector<ScreenEntry> at_stage(const std::string& stage) const;
};

struct ScreenConfig {
  ChainConfig chain;            // final fit
  ChainConfig pairwise_chain;   // pairwise and intermediate reduced fits
  ShrinkageHyper hyper;
  PriorConfig prior;
  double alpha = 0.2;           // inactive iff count < alpha * max count
  int max_rounds = 5;
  int jobs = 1;

  ScreenConfig() {
    pairwise_chain.burnin = 1000;
    pairwise_chain.samples = 1000;
  }
};

// Fits all K(K-1)/2 two-group models {k1,k2},{k2},{k1} and records each
// pairwise component's edge count. Jobs run in parallel; every job draws
// from its own RNG stream, so the report does not depend on the thread
// count.
ScreenReport pairwise_screen(const GroupStats& stats, const ScreenConfig& cfg);

// Flags pairwise components with edge_count < alpha * max as inactive and
// returns the candidate family: all singletons, the active pairs, and every
// higher-order subset whose internal pairs are all active.
struct PruneResult {
  ModelSpec spec;
  std::vector<GroupSet> inactive_pairs;
};
PruneResult prune_components(ScreenReport& report, double alpha, int K, int p);

// Full pipeline: pairwise screen, prune, then alternate reduced fits and
// count-based pruning until the family is stable (or max_rounds), and fit
// the stable family with the full chain configuration.
struct ScreenResult {
  ScreenReport report;
  ModelSpec final_spec;
  FitResult final_fit;
  std::vector<GroupSet> inactive_pairs;
};
ScreenResult iterative_reduce(const GroupStats& stats, const ScreenConfig& cfg);

}  // namespace bjns
