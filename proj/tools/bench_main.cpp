// Benchmark of the parallel kernels against their serial references, plus
// sampler sweep throughput and the effect of --jobs on pairwise screening.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bjns/gibbs.hpp"
#include "bjns/kernels.hpp"
#include "bjns/screening.hpp"
#include "bjns/synthetic.hpp"

using namespace bjns;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto start = Clock::now();
    fn();
    best = std::min(best, seconds_since(start));
  }
  return best;
}

void report(const char* name, double serial_s, double parallel_s) {
  std::printf("%-28s serial %8.4fs   parallel %8.4fs   speedup %.2fx\n", name,
              serial_s, parallel_s, serial_s / parallel_s);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; parallel paths run serially\n");
#endif

  Rng rng = make_rng(7, StreamTag::kTest);
  std::normal_distribution<double> normal(0.0, 1.0);

  {
    const long n = 4000, p = 300;
    Eigen::MatrixXd Y(n, p);
    for (long r = 0; r < n; ++r)
      for (long c = 0; c < p; ++c) Y(r, c) = normal(rng);
    Eigen::MatrixXd out;
    const double ts = time_best_of(
        3, [&] { out = kernels::serial::covariance(Y, true); });
    const double tp =
        time_best_of(3, [&] { out = kernels::covariance(Y, true); });
    report("covariance 4000x300", ts, tp);
  }

  {
    const int p = 400;
    Eigen::MatrixXd S(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = i; j < p; ++j) S(i, j) = S(j, i) = normal(rng);
    Eigen::VectorXd diag = Eigen::VectorXd::Ones(p);
    std::vector<kernels::EdgeEntry> edges;
    std::uniform_int_distribution<int> pick(0, p - 1);
    for (int e = 0; e < 4 * p; ++e) {
      int i = pick(rng), j = pick(rng);
      if (i == j) continue;
      edges.push_back({std::min(i, j), std::max(i, j), normal(rng)});
    }
    Eigen::MatrixXd out;
    const double ts = time_best_of(
        5, [&] { out = kernels::serial::product_cache(S, diag, edges); });
    const double tp = time_best_of(
        5, [&] { out = kernels::product_cache(S, diag, edges); });
    report("product cache p=400", ts, tp);
  }

  {
    const double n = 5000, s_ii = 1.0, b = 2.0;
    const double mode = diag_mode(n, s_ii, b);
    const long points = static_cast<long>(6.0 * mode / 0.001) + 1;
    std::vector<double> grid(points), weights;
    for (long g = 0; g < points; ++g) grid[g] = g * 0.001;
    const double ts = time_best_of(5, [&] {
      kernels::serial::diag_grid_weights(n, s_ii, b, 0.0, grid, weights);
    });
    const double tp = time_best_of(
        5, [&] { kernels::diag_grid_weights(n, s_ii, b, 0.0, grid, weights); });
    report("diag grid weights", ts, tp);
  }

  {
    // Sweep throughput on a mid-size full four-group model.
    Rng gen = make_rng(11, StreamTag::kTest);
    const GroundTruth truth = gen_random_shared(60, 0.95, 0.5, 4, gen);
    const std::vector<Eigen::MatrixXd> data =
        sample_groups(truth, std::vector<long>(4, 150), gen);
    const GroupStats stats = compute_group_stats(data, false);
    const ModelSpec spec = ModelSpec::full(4, 60);
    ChainConfig cfg;
    cfg.burnin = 0;
    cfg.samples = 50;
    cfg.seed = 123;
    const auto start = Clock::now();
    run_chain(stats, spec, cfg, ShrinkageHyper{}, PriorConfig{});
    const double dt = seconds_since(start);
    std::printf("%-28s %8.1f sweeps/s (p=60, K=4, full family)\n",
                "gibbs sweep throughput", 50.0 / dt);
  }

  {
    // Screening: identical report, different wall time per --jobs.
    Rng gen = make_rng(13, StreamTag::kTest);
    const GroundTruth truth = gen_block_k6(30, gen);
    const std::vector<Eigen::MatrixXd> data =
        sample_groups(truth, std::vector<long>(6, 150), gen);
    const GroupStats stats = compute_group_stats(data, false);
    ScreenConfig cfg;
    cfg.pairwise_chain.burnin = 200;
    cfg.pairwise_chain.samples = 200;
    cfg.chain.seed = cfg.pairwise_chain.seed = 321;
    cfg.jobs = 1;
    const auto s1 = Clock::now();
    pairwise_screen(stats, cfg);
    const double t1 = seconds_since(s1);
#ifdef _OPENMP
    cfg.jobs = omp_get_max_threads();
#endif
    const auto s2 = Clock::now();
    pairwise_screen(stats, cfg);
    const double t2 = seconds_since(s2);
    report("pairwise screen (15 fits)", t1, t2);
  }

  return 0;
}
