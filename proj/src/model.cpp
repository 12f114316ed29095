#include "bjns/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace bjns {

std::string GroupSet::label() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int k : members()) {
    if (!first) os << ',';
    os << k;
    first = false;
  }
  os << '}';
  return os.str();
}

std::vector<GroupSet> enumerate_full_components(int K) {
  if (K < 1 || K > 12)
    throw InvalidArgument("enumerate_full_components: K must be in [1,12], got " +
                          std::to_string(K));
  std::vector<GroupSet> out;
  out.reserve((1u << K) - 1);
  for (std::uint32_t m = 1; m < (1u << K); ++m) out.emplace_back(m);
  std::sort(out.begin(), out.end(), GroupSet::canonical_less);
  return out;
}

ModelSpec ModelSpec::make(int K, int p, std::vector<GroupSet> components) {
  ModelSpec spec;
  spec.K = K;
  spec.p = p;
  std::sort(components.begin(), components.end(), GroupSet::canonical_less);
  spec.components = std::move(components);
  if (K < 1) throw InvalidArgument("ModelSpec: K must be >= 1");
  if (p < 2) throw InvalidArgument("ModelSpec: p must be >= 2");
  std::string report = validate_spec(spec);
  if (!report.empty()) throw InvalidArgument("ModelSpec: " + report);
  return spec;
}

ModelSpec ModelSpec::full(int K, int p) {
  ModelSpec spec;
  spec.K = K;
  spec.p = p;
  spec.components = enumerate_full_components(K);
  if (p < 2) throw InvalidArgument("ModelSpec: p must be >= 2");
  return spec;
}

std::vector<int> components_containing(const ModelSpec& spec, int k) {
  if (k < 1 || k > spec.K)
    throw InvalidArgument("components_containing: group " + std::to_string(k) +
                          " out of range 1.." + std::to_string(spec.K));
  std::vector<int> out;
  for (int c = 0; c < spec.n_components(); ++c)
    if (spec.components[c].contains(k)) out.push_back(c);
  return out;
}

std::string validate_spec(const ModelSpec& spec) {
  std::vector<std::string> problems;
  std::set<std::uint32_t> seen;
  const std::uint32_t universe = (spec.K >= 32) ? ~0u : ((1u << spec.K) - 1);
  for (const GroupSet& c : spec.components) {
    if (c.empty()) problems.push_back("empty component");
    if ((c.mask() & ~universe) != 0)
      problems.push_back("component " + c.label() + " not a subset of {1.." +
                         std::to_string(spec.K) + "}");
    if (!seen.insert(c.mask()).second)
      problems.push_back("duplicate component " + c.label());
  }
  for (int k = 1; k <= spec.K; ++k) {
    if (!seen.count(GroupSet::singleton(k).mask()))
      problems.push_back("missing singleton " + GroupSet::singleton(k).label());
  }
  std::string report;
  for (const auto& s : problems) {
    if (!report.empty()) report += "; ";
    report += s;
  }
  return report;
}

void ThetaState::set(int i, int j, EdgeCoefficients coef) {
  if (!coef.absent() && (coef.value == 0.0 || !std::isfinite(coef.value)))
    throw InvalidArgument("ThetaState::set: active edge must carry a finite nonzero value");
  EdgeCoefficients& slot = edges_[edge_index(i, j, p_)];
  density_ += (coef.absent() ? 0 : 1) - (slot.absent() ? 0 : 1);
  slot = coef;
  ++version_;
}

void DiagState::set(int k, int i, double value) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw InvalidArgument("DiagState::set: diagonal entries must be finite and > 0");
  diag_(k, i) = value;
  ++version_;
}

Eigen::MatrixXd assemble_omega(const ThetaState& theta, const DiagState& delta,
                               const ModelSpec& spec, int k) {
  const int p = spec.p;
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) omega(i, i) = delta.get(k - 1, i);
  for (int i = 0; i < p - 1; ++i) {
    for (int j = i + 1; j < p; ++j) {
      const EdgeCoefficients& e = theta.edge(i, j);
      if (!e.absent() && spec.components[e.active_component].contains(k)) {
        omega(i, j) = e.value;
        omega(j, i) = e.value;
      }
    }
  }
  return omega;
}

}  // namespace bjns
