#include "bjns/trace.hpp"

namespace bjns {

SelectionTrace::SelectionTrace(const ModelSpec& spec, int planned_retained)
    : spec_(spec),
      E_(edge_count(spec.p)),
      C_(spec.n_components()),
      planned_(planned_retained),
      counts_(static_cast<std::size_t>(E_) * (C_ + 1), 0),
      counts_first_(static_cast<std::size_t>(E_) * (C_ + 1), 0),
      values_(static_cast<std::size_t>(E_) * C_),
      diag_sum_(Eigen::MatrixXd::Zero(spec.K, spec.p)) {}

void SelectionTrace::record(const ThetaState& theta, const DiagState& delta) {
  const bool first_half = retained_ < planned_ / 2;
  for (int e = 0; e < E_; ++e) {
    const EdgeCoefficients& coef = theta.edge(e);
    ++counts_[slot(e, coef.active_component)];
    if (first_half) ++counts_first_[slot(e, coef.active_component)];
    if (!coef.absent())
      values_[static_cast<std::size_t>(e) * C_ + coef.active_component]
          .push_back(coef.value);
  }
  diag_sum_ += delta.matrix();
  ++retained_;
}

}  // namespace bjns
