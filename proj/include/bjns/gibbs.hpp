#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bjns/common.hpp"
#include "bjns/model.hpp"
#include "bjns/stats.hpp"
#include "bjns/trace.hpp"

namespace bjns {

// Hyperparameters of the Gamma priors that drive the adaptive shrinkage.
struct ShrinkageHyper {
  double r = 1e-2;
  double s = 1e-6;

  void validate() const {
    if (!(r > 0.0) || !(s > 0.0))
      throw InvalidArgument("ShrinkageHyper: r and s must be > 0");
  }
};

enum class PriorOdds { kLiteral, kCorrected };

// Edge-inclusion prior. In literal mode the per-edge mixture weights are
// exactly 1 : c_1 : ... : c_L and q1/q2/tau are unused. Corrected mode
// multiplies every non-null weight by q/(1-q), with q = q1 while the
// resulting pattern density stays at or below tau and q2 beyond it.
// Unset fields (NaN) are resolved from the data scale: q1 = max(1/p, 1e-4),
// q2 = q1^2, tau = 0.25 * sqrt(mean_n / log p).
struct PriorConfig {
  double q1 = std::numeric_limits<double>::quiet_NaN();
  double q2 = std::numeric_limits<double>::quiet_NaN();
  double tau = std::numeric_limits<double>::quiet_NaN();
  PriorOdds mode = PriorOdds::kLiteral;

  PriorConfig resolved(int p, double mean_n) const;
  void validate() const;
};

enum class DiagSampler { kGrid, kPointMass };

struct ChainConfig {
  int burnin = 2000;
  int samples = 2000;
  std::uint64_t seed = 0;
  DiagSampler diag_sampler = DiagSampler::kPointMass;
  int refresh_every = 500;

  // Test hooks: freeze the shrinkage matrix at a constant and/or keep the
  // diagonals fixed, which makes the chain's stationary pattern law match
  // the closed-form enumeration oracle.
  std::optional<double> fixed_lambda;
  bool update_diagonals = true;

  void validate() const {
    if (burnin < 0) throw InvalidArgument("ChainConfig: burnin must be >= 0");
    if (samples < 1) throw InvalidArgument("ChainConfig: samples must be >= 1");
    if (refresh_every < 1)
      throw InvalidArgument("ChainConfig: refresh_every must be >= 1");
    if (fixed_lambda && !(*fixed_lambda > 0.0))
      throw InvalidArgument("ChainConfig: fixed_lambda must be > 0");
  }
};

// lambda | theta ~ Gamma(r + 0.5, 0.5 theta^2 + s), shape-rate.
double draw_lambda(double theta_value, const ShrinkageHyper& hyper, Rng& rng);

// gamma | delta ~ Gamma(r + 1, |delta| + s), shape-rate.
double draw_gamma_diag(double delta_value, const ShrinkageHyper& hyper, Rng& rng);

// Normal-mixture parameters of one edge's conditional: for component l
// over subset r,
//   mu_l    = -R_l / (P_l + lambda_l),
//   nu2_l   = 1 / (P_l + lambda_l),
//   log_c_l = 0.5 log(2 pi nu2_l) + mu_l^2 / (2 nu2_l),
// where R_l sums n_k (Omega_{:i}' S_{:j} + Omega_{:j}' S_{:i}) over the
// member groups with this edge's own contribution removed, and P_l sums
// n_k (s_ii + s_jj).
struct MixtureParams {
  std::vector<double> mu;
  std::vector<double> nu2;
  std::vector<double> log_c;
};

MixtureParams edge_mixture_params(const QuadFormCache& cache,
                                  const ThetaState& theta,
                                  const DiagState& delta, int i, int j,
                                  const std::vector<double>& lambdas);

// Normalized selection probabilities over {absent, component 1..L}.
// log_space selects the max-subtraction path the sampler uses; the direct
// path exists so tests can pin the two against each other.
std::vector<double> category_probabilities(const MixtureParams& params,
                                           const PriorConfig& prior,
                                           int density_if_present,
                                           bool log_space = true);

EdgeCoefficients sample_theta_ij(const MixtureParams& params,
                                 const PriorConfig& prior,
                                 int current_density_excluding_edge, Rng& rng);

// Mode of the diagonal conditional exp{n log t - (n/2) s_ii t^2 - b t}:
// (-b + sqrt(b^2 + 4 n^2 s_ii)) / (2 n s_ii), always > 0.
double diag_mode(double n, double s_ii, double b);

// Grid mode draws from the discretized conditional on seq(0, 6*mode, 0.001)
// with the overflow guard of rescaling by the mode's weight; point-mass
// mode returns the mode deterministically.
double sample_diag(double n, double s_ii, double b, DiagSampler sampler,
                   Rng& rng);

// b = gamma + n_k sum_{j != i} omega^k_ij s^k_ij, read from the cache.
double compute_b(const QuadFormCache& cache, const ThetaState& theta,
                 const DiagState& delta, double gamma_draw, int k, int i);

// One full sweep of Algorithm-style updates: edges of row i in order, then
// that row's K diagonals, with the final row's diagonals after the loop.
void gibbs_sweep(ThetaState& theta, DiagState& delta, QuadFormCache& cache,
                 const ShrinkageHyper& hyper, const PriorConfig& prior,
                 const ChainConfig& cfg, Rng& rng);

// Called once per retained sweep, after recording.
using SweepObserver =
    std::function<void(int retained_index, const ThetaState&, const DiagState&)>;

// Runs burnin + samples sweeps from the identity initialization and records
// every retained sweep. chain_index selects an independent RNG stream.
SelectionTrace run_chain(const GroupStats& stats, const ModelSpec& spec,
                         const ChainConfig& cfg, const ShrinkageHyper& hyper,
                         const PriorConfig& prior,
                         const SweepObserver& observer = nullptr,
                         std::uint64_t chain_index = 0);

}  // namespace bjns
