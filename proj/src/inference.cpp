#include "bjns/inference.hpp"

#include <algorithm>
#include <cmath>

namespace bjns {

namespace {

double empirical_quantile(std::vector<double> sorted, double q) {
  // Linear interpolation between order statistics.
  const std::size_t n = sorted.size();
  const double pos = q * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

constexpr int kMinDrawsForCi = 20;

}  // namespace

std::uint32_t FitResult::selected_mask(int i, int j) const {
  const EdgeFit& e = edges[edge_index(i, j, spec.p)];
  return e.selected == kAbsent ? 0u : spec.components[e.selected].mask();
}

FitResult majority_vote(const SelectionTrace& trace, double ci_level) {
  if (trace.retained() == 0)
    throw InvalidArgument("majority_vote: empty trace");
  const ModelSpec& spec = trace.spec();
  const int C = spec.n_components();

  FitResult fit;
  fit.spec = spec;
  fit.retained = trace.retained();
  fit.ci_level = ci_level;
  fit.diag_mean.resize(spec.K, spec.p);
  for (int k = 0; k < spec.K; ++k)
    for (int i = 0; i < spec.p; ++i) fit.diag_mean(k, i) = trace.diag_mean(k, i);

  fit.edges.resize(trace.E());
  for (int e = 0; e < trace.E(); ++e) {
    const Edge ij = edge_at(e, spec.p);
    EdgeFit& ef = fit.edges[e];
    ef.i = ij.i;
    ef.j = ij.j;
    // Absent wins ties by being scanned first with a strict comparison;
    // components then tie-break toward the lowest index the same way.
    int best = kAbsent;
    std::uint32_t best_count = trace.count(e, kAbsent);
    for (int c = 0; c < C; ++c) {
      if (trace.count(e, c) > best_count) {
        best = c;
        best_count = trace.count(e, c);
      }
    }
    ef.selected = best;
    ef.frequency =
        static_cast<double>(best_count) / static_cast<double>(trace.retained());
    if (best != kAbsent) {
      const std::vector<double>& draws = trace.values(e, best);
      double sum = 0.0;
      for (double v : draws) sum += v;
      ef.estimate = sum / static_cast<double>(draws.size());
      if (static_cast<int>(draws.size()) >= kMinDrawsForCi)
        ef.ci = credible_interval(trace, ij.i, ij.j, best, ci_level);
    }
  }
  return fit;
}

std::pair<double, double> credible_interval(const SelectionTrace& trace, int i,
                                            int j, int component, double level) {
  if (!(level > 0.0 && level < 1.0))
    throw InvalidArgument("credible_interval: level must be in (0,1)");
  const int e = edge_index(i, j, trace.spec().p);
  std::vector<double> draws = trace.values(e, component);
  if (static_cast<int>(draws.size()) < kMinDrawsForCi)
    throw NotEnoughSamples("credible_interval: fewer than 20 retained draws");
  std::sort(draws.begin(), draws.end());
  const double alpha = 1.0 - level;
  return {empirical_quantile(draws, alpha / 2.0),
          empirical_quantile(std::move(draws), 1.0 - alpha / 2.0)};
}

double kappa(const std::vector<std::uint32_t>& selected_masks,
             const std::vector<std::uint32_t>& truth_masks) {
  if (selected_masks.size() != truth_masks.size())
    throw InvalidArgument("kappa: pattern lengths differ");
  std::size_t correct = 0;
  for (std::size_t e = 0; e < selected_masks.size(); ++e)
    if (selected_masks[e] == truth_masks[e]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(selected_masks.size());
}

std::vector<std::uint32_t> pattern_masks(const ThetaState& theta,
                                         const ModelSpec& spec) {
  std::vector<std::uint32_t> masks(edge_count(spec.p), 0);
  for (int e = 0; e < edge_count(spec.p); ++e) {
    const EdgeCoefficients& coef = theta.edge(e);
    if (!coef.absent()) masks[e] = spec.components[coef.active_component].mask();
  }
  return masks;
}

std::vector<Eigen::MatrixXd> estimate_matrices(const FitResult& fit) {
  const ModelSpec& spec = fit.spec;
  std::vector<Eigen::MatrixXd> omegas;
  omegas.reserve(spec.K);
  for (int k = 1; k <= spec.K; ++k) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(spec.p, spec.p);
    for (int i = 0; i < spec.p; ++i) omega(i, i) = fit.diag_mean(k - 1, i);
    for (const EdgeFit& ef : fit.edges) {
      if (ef.selected == kAbsent) continue;
      if (spec.components[ef.selected].contains(k)) {
        omega(ef.i, ef.j) = ef.estimate;
        omega(ef.j, ef.i) = ef.estimate;
      }
    }
    omegas.push_back(std::move(omega));
  }
  return omegas;
}

}  // namespace bjns
