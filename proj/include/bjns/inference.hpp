#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bjns/model.hpp"
#include "bjns/trace.hpp"

namespace bjns {

// Majority-vote summary of a trace. selected is a component index or
// kAbsent; the point estimate conditions on the selected category only and
// is zero exactly when the edge is absent.
struct EdgeFit {
  int i = 0;
  int j = 0;
  int selected = kAbsent;
  double frequency = 0.0;   // share of retained sweeps in the selected category
  double estimate = 0.0;
  std::optional<std::pair<double, double>> ci;
};

struct FitResult {
  ModelSpec spec;
  int retained = 0;
  double ci_level = 0.0;
  std::vector<EdgeFit> edges;   // row-major upper-triangle order
  Eigen::MatrixXd diag_mean;    // K x p

  // Category of edge (i,j) as a group bitmask (0 = absent); masks compare
  // across different component families.
  std::uint32_t selected_mask(int i, int j) const;
};

// Per edge, the category with the highest retained frequency. Ties break
// toward absent, then toward the lowest component index. Credible
// intervals are attached for selected components with >= 20 draws.
FitResult majority_vote(const SelectionTrace& trace, double ci_level = 0.9);

// Empirical (alpha/2, 1-alpha/2) quantiles of the draws for the given
// component at edge (i,j); requires >= 20 retained draws.
std::pair<double, double> credible_interval(const SelectionTrace& trace, int i,
                                            int j, int component, double level);

// Share of edges whose selected category mask matches the truth mask.
double kappa(const std::vector<std::uint32_t>& selected_masks,
             const std::vector<std::uint32_t>& truth_masks);

// Per-sweep selection pattern of a live state, as masks (0 = absent).
std::vector<std::uint32_t> pattern_masks(const ThetaState& theta,
                                         const ModelSpec& spec);

// Assembled point estimates: off-diagonals from the voted estimates,
// diagonals from the retained means.
std::vector<Eigen::MatrixXd> estimate_matrices(const FitResult& fit);

}  // namespace bjns
