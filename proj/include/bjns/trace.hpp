#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "bjns/common.hpp"
#include "bjns/model.hpp"

namespace bjns {

// Per-edge selection history over the retained sweeps: how often each
// category (absent, or one of the spec's components) was active, and the
// values drawn while it was. Counts are also kept split by trace half so
// that stability can be reported when no ground truth exists.
class SelectionTrace {
 public:
  SelectionTrace() = default;
  SelectionTrace(const ModelSpec& spec, int planned_retained);

  void record(const ThetaState& theta, const DiagState& delta);

  const ModelSpec& spec() const { return spec_; }
  int retained() const { return retained_; }
  int E() const { return E_; }
  int n_categories() const { return C_ + 1; }

  // category: kAbsent or a component index.
  std::uint32_t count(int edge, int category) const {
    return counts_[slot(edge, category)];
  }
  std::uint32_t count_first_half(int edge, int category) const {
    return counts_first_[slot(edge, category)];
  }
  std::uint32_t count_second_half(int edge, int category) const {
    return counts_[slot(edge, category)] - counts_first_[slot(edge, category)];
  }

  const std::vector<double>& values(int edge, int component) const {
    return values_[static_cast<std::size_t>(edge) * C_ + component];
  }

  // Posterior mean of psi^k_ii over the retained sweeps.
  double diag_mean(int k, int i) const {
    return diag_sum_(k, i) / static_cast<double>(retained_);
  }

 private:
  std::size_t slot(int edge, int category) const {
    return static_cast<std::size_t>(edge) * (C_ + 1) + (category + 1);
  }

  ModelSpec spec_;
  int E_ = 0;
  int C_ = 0;
  int retained_ = 0;
  int planned_ = 0;
  std::vector<std::uint32_t> counts_;        // E x (C+1), absent in slot 0
  std::vector<std::uint32_t> counts_first_;  // same layout, first half only
  std::vector<std::vector<double>> values_;  // E x C draw lists
  Eigen::MatrixXd diag_sum_;                 // K x p
};

}  // namespace bjns
