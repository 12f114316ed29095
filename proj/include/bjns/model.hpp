#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "bjns/common.hpp"

namespace bjns {

// A nonempty subset of the groups {1..K}, stored as a bitmask with group k
// on bit k-1. Subsets order canonically by cardinality descending, then by
// descending mask value, which is reverse-lexicographic on the sorted
// member lists. For K=3 this yields
//   {1,2,3},{2,3},{1,3},{1,2},{3},{2},{1}.
class GroupSet {
 public:
  GroupSet() = default;
  explicit GroupSet(std::uint32_t mask) : mask_(mask) {}
  static GroupSet singleton(int k) { return GroupSet(1u << (k - 1)); }
  static GroupSet of(std::initializer_list<int> groups) {
    std::uint32_t m = 0;
    for (int k : groups) m |= 1u << (k - 1);
    return GroupSet(m);
  }

  std::uint32_t mask() const { return mask_; }
  bool contains(int k) const { return (mask_ >> (k - 1)) & 1u; }
  bool contains_all(GroupSet other) const {
    return (mask_ & other.mask_) == other.mask_;
  }
  int cardinality() const { return __builtin_popcount(mask_); }
  bool empty() const { return mask_ == 0; }

  std::vector<int> members() const {
    std::vector<int> out;
    for (int k = 1; k <= 32; ++k)
      if (contains(k)) out.push_back(k);
    return out;
  }

  std::string label() const;  // e.g. "{1,3,5}"

  bool operator==(const GroupSet&) const = default;

  // Canonical order: larger subsets first, reverse-lexicographic within a
  // cardinality (equivalently, descending mask).
  static bool canonical_less(GroupSet a, GroupSet b) {
    if (a.cardinality() != b.cardinality())
      return a.cardinality() > b.cardinality();
    return a.mask_ > b.mask_;
  }

 private:
  std::uint32_t mask_ = 0;
};

// The decomposition family: which subset components are active. Every
// singleton must be present (diagonals live there). Reduced families are
// first class; the full family has 2^K - 1 components.
struct ModelSpec {
  int K = 0;
  int p = 0;
  std::vector<GroupSet> components;  // canonical order

  int n_components() const { return static_cast<int>(components.size()); }

  // Sorts into canonical order and checks all invariants; throws
  // InvalidArgument with a description of every violation.
  static ModelSpec make(int K, int p, std::vector<GroupSet> components);

  // All 2^K - 1 nonempty subsets in canonical order. K is capped at 12:
  // beyond that the per-edge mixture is too large and the screening path
  // must be used instead.
  static ModelSpec full(int K, int p);
};

std::vector<GroupSet> enumerate_full_components(int K);

// Indices (into spec.components) of the components containing group k.
std::vector<int> components_containing(const ModelSpec& spec, int k);

// Returns an empty string when valid, otherwise a ';'-joined report of all
// violations ("missing singleton {2}", "duplicate component {1,2}", ...).
std::string validate_spec(const ModelSpec& spec);

constexpr int kAbsent = -1;

// One edge's parameter vector theta_ij, which carries at most one nonzero
// coordinate: the active component (or kAbsent) and its value.
struct EdgeCoefficients {
  int active_component = kAbsent;
  double value = 0.0;

  bool absent() const { return active_component == kAbsent; }
  bool operator==(const EdgeCoefficients&) const = default;
};

// All off-diagonal parameters, one EdgeCoefficients per upper-triangle
// edge. Mutations go through set() so that the version counter lets the
// quadratic-form cache detect stale reads.
class ThetaState {
 public:
  ThetaState(const ModelSpec& spec)
      : p_(spec.p), edges_(edge_count(spec.p)) {}

  const EdgeCoefficients& edge(int i, int j) const {
    return edges_[edge_index(i, j, p_)];
  }
  const EdgeCoefficients& edge(int idx) const { return edges_[idx]; }

  void set(int i, int j, EdgeCoefficients coef);

  // Number of present edges (the pattern density d_ell).
  int density() const { return density_; }
  int p() const { return p_; }
  std::uint64_t version() const { return version_; }

 private:
  int p_;
  std::vector<EdgeCoefficients> edges_;
  int density_ = 0;
  std::uint64_t version_ = 0;
};

// All diagonals psi^k_ii, strictly positive.
class DiagState {
 public:
  DiagState(const ModelSpec& spec)
      : diag_(Eigen::MatrixXd::Ones(spec.K, spec.p)) {}

  double get(int k, int i) const { return diag_(k, i); }
  void set(int k, int i, double value);
  const Eigen::MatrixXd& matrix() const { return diag_; }
  std::uint64_t version() const { return version_; }

 private:
  Eigen::MatrixXd diag_;  // K x p
  std::uint64_t version_ = 0;
};

// Omega^k assembled from the current state: diagonal from delta, entry
// (i,j) equal to theta_ij's value when its active component contains k.
Eigen::MatrixXd assemble_omega(const ThetaState& theta, const DiagState& delta,
                               const ModelSpec& spec, int k);

}  // namespace bjns
