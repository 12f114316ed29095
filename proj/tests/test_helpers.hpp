// Test-only oracles: brute-force statistics, dense quadratic evaluation,
// quadrature and argmax for the diagonal density, the closed-form pattern
// posterior for small instances, and a normal quantile. These stay
// independent of the production code paths they check.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "bjns/common.hpp"
#include "bjns/model.hpp"
#include "bjns/oracle.hpp"
#include "bjns/stats.hpp"

namespace bjns::testing {

// Covariance by explicit double loop over entries and observations.
inline Eigen::MatrixXd brute_covariance(const Eigen::MatrixXd& data,
                                        bool center) {
  const long n = data.rows();
  const long p = data.cols();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
  if (center) {
    for (long c = 0; c < p; ++c) {
      for (long r = 0; r < n; ++r) mean(c) += data(r, c);
      mean(c) /= static_cast<double>(n);
    }
  }
  Eigen::MatrixXd S(p, p);
  for (long a = 0; a < p; ++a)
    for (long b = 0; b < p; ++b) {
      double acc = 0.0;
      for (long r = 0; r < n; ++r)
        acc += (data(r, a) - mean(a)) * (data(r, b) - mean(b));
      S(a, b) = acc / static_cast<double>(n);
    }
  return S;
}

// sum_k w_k tr[(Omega^k)^2 S^k] evaluated by plain matrix algebra on
// arbitrary (not necessarily identifiability-constrained) component
// matrices: psi[c] holds the off-diagonal values of component c, diagonals
// are taken from delta for the singleton components.
inline double direct_quadratic(const GroupStats& stats, const ModelSpec& spec,
                               const std::vector<Eigen::MatrixXd>& psi_offdiag,
                               const Eigen::MatrixXd& delta_kp,
                               const Eigen::VectorXd& weights) {
  const int p = spec.p;
  double total = 0.0;
  for (int k = 1; k <= stats.K(); ++k) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(p, p);
    for (int c = 0; c < spec.n_components(); ++c)
      if (spec.components[c].contains(k)) omega += psi_offdiag[c];
    for (int i = 0; i < p; ++i) omega(i, i) = delta_kp(k - 1, i);
    total += weights(k - 1) * (omega * omega * stats.S[k - 1]).trace();
  }
  return total;
}

// Log-density kernel of the diagonal conditional.
inline double diag_logf(double t, double n, double s_ii, double b) {
  return n * std::log(t) - 0.5 * n * s_ii * t * t - b * t;
}

// Posterior mean of the diagonal conditional by Simpson quadrature around
// the mode, in log space.
inline double diag_quadrature_mean(double n, double s_ii, double b) {
  const double mode =
      (-b + std::sqrt(b * b + 4.0 * n * n * s_ii)) / (2.0 * n * s_ii);
  const double sd = 1.0 / std::sqrt(n * (1.0 / (mode * mode) + s_ii));
  const double lo = std::max(mode - 12.0 * sd, 1e-12);
  const double hi = mode + 12.0 * sd;
  const long N = 200000;  // even
  const double h = (hi - lo) / static_cast<double>(N);
  const double shift = diag_logf(mode, n, s_ii, b);
  double mass = 0.0, first = 0.0;
  for (long g = 0; g <= N; ++g) {
    const double t = lo + h * static_cast<double>(g);
    const double f = std::exp(diag_logf(t, n, s_ii, b) - shift);
    const double w = (g == 0 || g == N) ? 1.0 : (g % 2 == 1 ? 4.0 : 2.0);
    mass += w * f;
    first += w * f * t;
  }
  return first / mass;
}

// Argmax of the diagonal conditional by ternary search (it is unimodal).
inline double diag_numeric_argmax(double n, double s_ii, double b) {
  double lo = 1e-12;
  double hi = 2.0 * (std::abs(b) / (n * s_ii) + 1.0 / std::sqrt(s_ii)) + 1.0;
  for (int it = 0; it < 300; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (diag_logf(m1, n, s_ii, b) < diag_logf(m2, n, s_ii, b))
      lo = m1;
    else
      hi = m2;
  }
  return 0.5 * (lo + hi);
}

// Closed-form pattern posterior for small instances with the diagonals
// fixed and a constant shrinkage lambda. A pattern assigns every edge a
// category in {0 = absent, 1..C = component index + 1}; the returned vector
// is indexed by sum_e cat_e (C+1)^e and normalized. The prior weight per
// present edge is sqrt(2 pi / lambda), which makes the enumeration target
// exactly the stationary law of the literal-mode sampler.
inline std::vector<double> enumerate_pattern_posterior(
    const GroupStats& stats, const ModelSpec& spec, const DiagState& delta,
    double lambda) {
  const int E = edge_count(spec.p);
  const int C = spec.n_components();
  Eigen::VectorXd weights(stats.K());
  for (int k = 0; k < stats.K(); ++k)
    weights(k) = static_cast<double>(stats.n[k]);
  const DenseQuadForm oracle = materialize_oracle(stats, spec, delta, weights);

  const Eigen::MatrixXd precision =
      oracle.upsilon +
      lambda * Eigen::MatrixXd::Identity(oracle.upsilon.rows(),
                                         oracle.upsilon.cols());

  long n_patterns = 1;
  for (int e = 0; e < E; ++e) n_patterns *= C + 1;

  std::vector<double> log_mass(n_patterns);
  double max_lm = -1e300;
  for (long pat = 0; pat < n_patterns; ++pat) {
    std::vector<int> idx;  // global theta indices of the present edges
    long rest = pat;
    for (int e = 0; e < E; ++e) {
      const int cat = static_cast<int>(rest % (C + 1));
      rest /= C + 1;
      if (cat > 0) idx.push_back((cat - 1) * E + e);
    }
    const int d = static_cast<int>(idx.size());
    double lm = d * 0.5 * std::log(2.0 * M_PI / lambda);  // literal prior
    lm += d * 0.5 * std::log(lambda);                     // |Lambda_ll|^{1/2}
    if (d > 0) {
      Eigen::MatrixXd sub(d, d);
      Eigen::VectorXd a_sub(d);
      for (int r = 0; r < d; ++r) {
        a_sub(r) = oracle.a(idx[r]);
        for (int c = 0; c < d; ++c) sub(r, c) = precision(idx[r], idx[c]);
      }
      const Eigen::LLT<Eigen::MatrixXd> llt(sub);
      double logdet = 0.0;
      for (int r = 0; r < d; ++r) logdet += std::log(llt.matrixL()(r, r));
      lm -= logdet;  // -(1/2) log det
      const Eigen::VectorXd solved = llt.solve(a_sub);
      lm += 0.5 * a_sub.dot(solved);
    }
    log_mass[pat] = lm;
    max_lm = std::max(max_lm, lm);
  }
  double total = 0.0;
  for (long pat = 0; pat < n_patterns; ++pat) {
    log_mass[pat] = std::exp(log_mass[pat] - max_lm);
    total += log_mass[pat];
  }
  for (double& m : log_mass) m /= total;
  return log_mass;
}

inline double total_variation(const std::vector<double>& a,
                              const std::vector<double>& b) {
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
  return 0.5 * tv;
}

// Standard normal quantile by bisection on the CDF.
inline double normal_quantile(double q) {
  double lo = -10.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
    (cdf < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Random positive-definite-ish sample stats from Gaussian draws.
inline GroupStats random_stats(int K, int p, long n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::MatrixXd> data;
  for (int k = 0; k < K; ++k) {
    Eigen::MatrixXd Y(n, p);
    for (long r = 0; r < n; ++r)
      for (int c = 0; c < p; ++c) Y(r, c) = normal(rng);
    data.push_back(std::move(Y));
  }
  return compute_group_stats(data, false);
}

}  // namespace bjns::testing
