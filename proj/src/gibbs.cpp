#include "bjns/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bjns/kernels.hpp"

namespace bjns {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

PriorConfig PriorConfig::resolved(int p, double mean_n) const {
  PriorConfig out = *this;
  if (std::isnan(out.q1)) out.q1 = std::max(1.0 / p, 1e-4);
  if (std::isnan(out.q2)) out.q2 = out.q1 * out.q1;
  if (std::isnan(out.tau)) out.tau = 0.25 * std::sqrt(mean_n / std::log(p));
  out.validate();
  return out;
}

void PriorConfig::validate() const {
  if (std::isnan(q1) || std::isnan(q2) || std::isnan(tau)) return;  // unresolved
  if (!(q2 > 0.0) || !(q2 <= q1) || !(q1 < 1.0))
    throw InvalidArgument("PriorConfig: need 0 < q2 <= q1 < 1");
  if (!(tau >= 0.0)) throw InvalidArgument("PriorConfig: tau must be >= 0");
}

double draw_lambda(double theta_value, const ShrinkageHyper& hyper, Rng& rng) {
  const double shape = hyper.r + 0.5;
  const double rate = 0.5 * theta_value * theta_value + hyper.s;
  std::gamma_distribution<double> dist(shape, 1.0 / rate);
  return std::max(dist(rng), std::numeric_limits<double>::min());
}

double draw_gamma_diag(double delta_value, const ShrinkageHyper& hyper, Rng& rng) {
  const double shape = hyper.r + 1.0;
  const double rate = std::abs(delta_value) + hyper.s;
  std::gamma_distribution<double> dist(shape, 1.0 / rate);
  return std::max(dist(rng), std::numeric_limits<double>::min());
}

MixtureParams edge_mixture_params(const QuadFormCache& cache,
                                  const ThetaState& theta,
                                  const DiagState& delta, int i, int j,
                                  const std::vector<double>& lambdas) {
  const ModelSpec& spec = cache.spec();
  const GroupStats& stats = cache.stats();
  const int C = spec.n_components();
  if (static_cast<int>(lambdas.size()) != C)
    throw InvalidArgument("edge_mixture_params: one lambda per component required");

  const EdgeCoefficients& current = theta.edge(i, j);

  MixtureParams params;
  params.mu.resize(C);
  params.nu2.resize(C);
  params.log_c.resize(C);
  for (int c = 0; c < C; ++c) {
    double resid = 0.0;
    for (int k : spec.components[c].members()) {
      double inner = cache.residual_inner(theta, delta, k - 1, i, j);
      // Remove this edge's own contribution so the residual only carries
      // the rest of the state.
      if (!current.absent() &&
          spec.components[current.active_component].contains(k)) {
        inner -= current.value *
                 (stats.S[k - 1](i, i) + stats.S[k - 1](j, j));
      }
      resid += static_cast<double>(stats.n[k - 1]) * inner;
    }
    const double precision = cache.upsilon_diag_weighted(c, i, j) + lambdas[c];
    if (!(precision > 0.0))
      throw InternalError("edge_mixture_params: non-positive mixture precision");
    params.nu2[c] = 1.0 / precision;
    params.mu[c] = -resid / precision;
    params.log_c[c] = 0.5 * std::log(kTwoPi * params.nu2[c]) +
                      params.mu[c] * params.mu[c] / (2.0 * params.nu2[c]);
  }
  return params;
}

namespace {

// Log prior odds added to every non-null category; zero in literal mode.
double log_prior_odds(const PriorConfig& prior, int density_if_present) {
  if (prior.mode == PriorOdds::kLiteral) return 0.0;
  const double q = (density_if_present <= prior.tau) ? prior.q1 : prior.q2;
  return std::log(q) - std::log1p(-q);
}

}  // namespace

std::vector<double> category_probabilities(const MixtureParams& params,
                                           const PriorConfig& prior,
                                           int density_if_present,
                                           bool log_space) {
  const int C = static_cast<int>(params.log_c.size());
  std::vector<double> probs(C + 1);
  const double odds = log_prior_odds(prior, density_if_present);
  if (log_space) {
    double max_lw = 0.0;  // absent carries log-weight 0
    for (int c = 0; c < C; ++c)
      max_lw = std::max(max_lw, params.log_c[c] + odds);
    probs[0] = std::exp(0.0 - max_lw);
    double total = probs[0];
    for (int c = 0; c < C; ++c) {
      probs[c + 1] = std::exp(params.log_c[c] + odds - max_lw);
      total += probs[c + 1];
    }
    for (double& w : probs) w /= total;
  } else {
    probs[0] = 1.0;
    double total = 1.0;
    for (int c = 0; c < C; ++c) {
      probs[c + 1] = std::exp(params.log_c[c] + odds);
      total += probs[c + 1];
    }
    for (double& w : probs) w /= total;
  }
  return probs;
}

EdgeCoefficients sample_theta_ij(const MixtureParams& params,
                                 const PriorConfig& prior,
                                 int current_density_excluding_edge, Rng& rng) {
  const std::vector<double> probs = category_probabilities(
      params, prior, current_density_excluding_edge + 1, true);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double acc = 0.0;
  int picked = 0;
  for (int c = 0; c < static_cast<int>(probs.size()); ++c) {
    acc += probs[c];
    if (u <= acc) {
      picked = c;
      break;
    }
    if (c + 1 == static_cast<int>(probs.size())) picked = c;  // rounding tail
  }
  if (picked == 0) return EdgeCoefficients{};
  const int comp = picked - 1;
  std::normal_distribution<double> normal(params.mu[comp],
                                          std::sqrt(params.nu2[comp]));
  double value = normal(rng);
  while (value == 0.0) value = normal(rng);  // keep "active" and "zero" distinct
  return EdgeCoefficients{comp, value};
}

double diag_mode(double n, double s_ii, double b) {
  if (!(s_ii > 0.0))
    throw DegenerateInput("diag_mode: sample variance s_ii must be > 0");
  const double disc = std::sqrt(b * b + 4.0 * n * n * s_ii);
  // For b > 0 the textbook form cancels; multiply through by the conjugate.
  if (b > 0.0) return 2.0 * n / (b + disc);
  return (-b + disc) / (2.0 * n * s_ii);
}

double sample_diag(double n, double s_ii, double b, DiagSampler sampler,
                   Rng& rng) {
  const double mode = diag_mode(n, s_ii, b);
  if (sampler == DiagSampler::kPointMass) return mode;

  constexpr double kStep = 0.001;
  const double hi = 6.0 * mode;
  const long points = static_cast<long>(hi / kStep) + 1;
  if (points > 50'000'000)
    throw InternalError("sample_diag: grid would exceed 5e7 points; use the "
                        "point-mass sampler");
  std::vector<double> grid(points);
  for (long g = 0; g < points; ++g) grid[g] = g * kStep;

  std::vector<double> weights;
  kernels::diag_grid_weights(n, s_ii, b, 0.0, grid, weights);
  double total = 0.0;
  for (double w : weights) total += w;
  if (!std::isfinite(total) || total == 0.0) {
    // Overflow guard: weights relative to the mode's weight.
    const double log_w_mode =
        n * std::log(mode) - 0.5 * n * s_ii * mode * mode - b * mode;
    kernels::diag_grid_weights(n, s_ii, b, log_w_mode, grid, weights);
    total = 0.0;
    for (double w : weights) total += w;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    std::fprintf(stderr,
                 "bjns: warning: diagonal grid weights underflowed "
                 "(n=%g, s_ii=%g, b=%g); returning the mode\n",
                 n, s_ii, b);
    return mode;
  }

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng) * total;
  double acc = 0.0;
  for (long g = 0; g < points; ++g) {
    acc += weights[g];
    if (u <= acc) return grid[g];
  }
  return grid[points - 1];
}

double compute_b(const QuadFormCache& cache, const ThetaState& theta,
                 const DiagState& delta, double gamma_draw, int k, int i) {
  return gamma_draw + static_cast<double>(cache.stats().n[k]) *
                          cache.offdiag_inner(theta, delta, k, i);
}

namespace {

void update_row_diagonals(ThetaState& theta, DiagState& delta,
                          QuadFormCache& cache, const ShrinkageHyper& hyper,
                          const ChainConfig& cfg, int i, Rng& rng) {
  const GroupStats& stats = cache.stats();
  for (int k = 0; k < cache.spec().K; ++k) {
    const double gamma = draw_gamma_diag(delta.get(k, i), hyper, rng);
    const double b = compute_b(cache, theta, delta, gamma, k, i);
    const double s_ii = stats.S[k](i, i);
    const double v = sample_diag(static_cast<double>(stats.n[k]), s_ii, b,
                                 cfg.diag_sampler, rng);
    const double old = delta.get(k, i);
    delta.set(k, i, v);
    cache.apply_diag_update(k, i, old, v);
  }
}

}  // namespace

void gibbs_sweep(ThetaState& theta, DiagState& delta, QuadFormCache& cache,
                 const ShrinkageHyper& hyper, const PriorConfig& prior,
                 const ChainConfig& cfg, Rng& rng) {
  const ModelSpec& spec = cache.spec();
  const int p = spec.p;
  const int C = spec.n_components();
  std::vector<double> lambdas(C);

  for (int i = 0; i < p - 1; ++i) {
    for (int j = i + 1; j < p; ++j) {
      const EdgeCoefficients old = theta.edge(i, j);
      for (int c = 0; c < C; ++c) {
        if (cfg.fixed_lambda) {
          lambdas[c] = *cfg.fixed_lambda;
        } else {
          const double theta_c = (old.active_component == c) ? old.value : 0.0;
          lambdas[c] = draw_lambda(theta_c, hyper, rng);
        }
      }
      const MixtureParams params =
          edge_mixture_params(cache, theta, delta, i, j, lambdas);
      const int density_excl = theta.density() - (old.absent() ? 0 : 1);
      const EdgeCoefficients next =
          sample_theta_ij(params, prior, density_excl, rng);
      theta.set(i, j, next);
      cache.apply_theta_update(i, j, old, next);
    }
    if (cfg.update_diagonals)
      update_row_diagonals(theta, delta, cache, hyper, cfg, i, rng);
  }
  if (cfg.update_diagonals)
    update_row_diagonals(theta, delta, cache, hyper, cfg, p - 1, rng);
}

SelectionTrace run_chain(const GroupStats& stats, const ModelSpec& spec,
                         const ChainConfig& cfg, const ShrinkageHyper& hyper,
                         const PriorConfig& prior, const SweepObserver& observer,
                         std::uint64_t chain_index) {
  cfg.validate();
  hyper.validate();
  const PriorConfig resolved = prior.resolved(spec.p, stats.mean_n());

  ThetaState theta(spec);
  DiagState delta(spec);
  QuadFormCache cache(stats, spec, theta, delta);
  Rng rng = make_rng(cfg.seed, StreamTag::kChain, chain_index);

  SelectionTrace trace(spec, cfg.samples);
  const int total = cfg.burnin + cfg.samples;
  for (int sweep = 0; sweep < total; ++sweep) {
    gibbs_sweep(theta, delta, cache, hyper, resolved, cfg, rng);
    if ((sweep + 1) % cfg.refresh_every == 0) cache.refresh(theta, delta);
    if (sweep >= cfg.burnin) {
      trace.record(theta, delta);
      if (observer) observer(sweep - cfg.burnin, theta, delta);
    }
  }
  return trace;
}

}  // namespace bjns
