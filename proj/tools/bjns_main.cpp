// bjns: joint sparse precision-matrix selection across related groups.
//
// Subcommands: fit | simulate | screen | score. Every run is a
// deterministic function of its inputs and --seed; rerunning a command
// reproduces its output files byte for byte.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bjns/gibbs.hpp"
#include "bjns/inference.hpp"
#include "bjns/io.hpp"
#include "bjns/screening.hpp"
#include "bjns/synthetic.hpp"

namespace fs = std::filesystem;
using namespace bjns;

namespace {

struct CommonFitOptions {
  std::string data_path;
  std::string spec_arg = "full";
  std::string out_dir;
  std::uint64_t seed = 0;
  ChainConfig chain;
  ShrinkageHyper hyper;
  PriorConfig prior;
  std::string prior_odds = "literal";
  std::string diag_sampler = "point";
  double q1 = -1.0, q2 = -1.0, tau = -1.0;
  int jobs = 1;
  int center_flag = -1;  // -1 = manifest decides
  double ci_level = 0.9;
};

void add_chain_options(CLI::App* cmd, CommonFitOptions& opt) {
  cmd->add_option("--data", opt.data_path, "group manifest JSON")->required();
  cmd->add_option("--seed", opt.seed, "RNG seed")->required();
  cmd->add_option("--out", opt.out_dir, "output directory")->required();
  cmd->add_option("--spec", opt.spec_arg,
                  "\"full\" or a model-spec JSON file (default full)");
  cmd->add_option("--burnin", opt.chain.burnin, "burn-in sweeps (default 2000)");
  cmd->add_option("--samples", opt.chain.samples,
                  "retained sweeps (default 2000)");
  cmd->add_option("--prior-odds", opt.prior_odds, "literal|corrected")
      ->check(CLI::IsMember({"literal", "corrected"}));
  cmd->add_option("--diag-sampler", opt.diag_sampler, "grid|point")
      ->check(CLI::IsMember({"grid", "point"}));
  cmd->add_option("--refresh-every", opt.chain.refresh_every,
                  "cache refresh period in sweeps (default 500)");
  cmd->add_option("--q1", opt.q1, "sparse-regime inclusion probability");
  cmd->add_option("--q2", opt.q2, "dense-regime inclusion probability");
  cmd->add_option("--tau", opt.tau, "density threshold between regimes");
  cmd->add_option("--shrink-r", opt.hyper.r, "shrinkage shape (default 1e-2)");
  cmd->add_option("--shrink-s", opt.hyper.s, "shrinkage rate (default 1e-6)");
  cmd->add_option("--jobs", opt.jobs, "worker thread bound (default 1)");
  cmd->add_option("--level", opt.ci_level,
                  "credible-interval level (default 0.9)");
  cmd->add_flag("--center,!--no-center",
                [&opt](std::int64_t count) { opt.center_flag = count > 0; },
                "override the manifest's centering choice");
}

void finish_options(CommonFitOptions& opt) {
  opt.chain.seed = opt.seed;
  opt.chain.diag_sampler =
      opt.diag_sampler == "grid" ? DiagSampler::kGrid : DiagSampler::kPointMass;
  opt.prior.mode = opt.prior_odds == "corrected" ? PriorOdds::kCorrected
                                                 : PriorOdds::kLiteral;
  if (opt.q1 >= 0) opt.prior.q1 = opt.q1;
  if (opt.q2 >= 0) opt.prior.q2 = opt.q2;
  if (opt.tau >= 0) opt.prior.tau = opt.tau;
#ifdef _OPENMP
  omp_set_num_threads(std::max(1, opt.jobs));
#endif
}

GroupStats load_groups(const CommonFitOptions& opt, io::Manifest& manifest) {
  manifest = io::read_manifest(opt.data_path);
  std::vector<Eigen::MatrixXd> data;
  for (const io::Manifest::Group& g : manifest.groups)
    data.push_back(io::read_csv_matrix(g.path));
  const bool center =
      opt.center_flag == -1 ? manifest.center : opt.center_flag == 1;
  return compute_group_stats(data, center);
}

ModelSpec resolve_spec(const std::string& arg, int K, int p) {
  if (arg == "full") return ModelSpec::full(K, p);
  return io::spec_from_json_file(arg, p);
}

int vote_half(const SelectionTrace& trace, int edge, bool first) {
  int best = kAbsent;
  std::uint32_t best_count =
      first ? trace.count_first_half(edge, kAbsent)
            : trace.count_second_half(edge, kAbsent);
  for (int c = 0; c < trace.spec().n_components(); ++c) {
    const std::uint32_t n = first ? trace.count_first_half(edge, c)
                                  : trace.count_second_half(edge, c);
    if (n > best_count) {
      best = c;
      best_count = n;
    }
  }
  return best;
}

void write_edges_by_component(const fs::path& path, const FitResult& fit) {
  std::ofstream out(path);
  out << "component,count\n";
  std::vector<int> counts(fit.spec.n_components(), 0);
  for (const EdgeFit& e : fit.edges)
    if (e.selected != kAbsent) ++counts[e.selected];
  for (int c = 0; c < fit.spec.n_components(); ++c)
    out << io::component_label(fit.spec.components[c]) << ',' << counts[c]
        << "\n";
}

void write_stability_csv(const fs::path& path, const SelectionTrace& trace) {
  std::ofstream out(path);
  out << "i,j,selected_first_half,selected_second_half,freq_first_half,"
         "freq_second_half,halves_agree\n";
  const int p = trace.spec().p;
  const double n1 = std::max(1, trace.retained() / 2);
  const double n2 = std::max(1, trace.retained() - trace.retained() / 2);
  for (int e = 0; e < trace.E(); ++e) {
    const Edge ij = edge_at(e, p);
    const int c1 = vote_half(trace, e, true);
    const int c2 = vote_half(trace, e, false);
    const double f1 = trace.count_first_half(e, c1) / n1;
    const double f2 = trace.count_second_half(e, c2) / n2;
    const auto label = [&](int c) {
      return c == kAbsent
                 ? std::string("absent")
                 : io::component_label(trace.spec().components[c]);
    };
    out << ij.i + 1 << ',' << ij.j + 1 << ',' << label(c1) << ',' << label(c2)
        << ',' << io::format_double(f1) << ',' << io::format_double(f2) << ','
        << (c1 == c2 ? 1 : 0) << "\n";
  }
}

void write_score_csv(std::ostream& out, const std::vector<std::uint32_t>& masks,
                     const GroundTruth& truth, const ModelSpec& fit_spec) {
  out << "target,MC%,SP%,SE%\n";
  const auto pct = [](double v) { return io::format_double(100.0 * v); };
  for (int k = 1; k <= truth.spec.K; ++k) {
    const Metrics m = score_pattern(omega_presence(masks, k),
                                    omega_presence(truth.edge_mask, k));
    out << "Omega" << k << ',' << pct(m.mcc) << ',' << pct(m.sp) << ','
        << pct(m.se) << "\n";
  }
  for (const GroupSet& c : fit_spec.components) {
    const Metrics m = score_pattern(component_presence(masks, c.mask()),
                                    component_presence(truth.edge_mask, c.mask()));
    out << "Psi" << io::component_label(c) << ',' << pct(m.mcc) << ','
        << pct(m.sp) << ',' << pct(m.se) << "\n";
  }
}

int cmd_fit(CommonFitOptions& opt, const std::string& truth_path,
            bool diag_trace) {
  finish_options(opt);
  io::Manifest manifest;
  const GroupStats stats = load_groups(opt, manifest);
  const ModelSpec spec = resolve_spec(
      opt.spec_arg, static_cast<int>(manifest.groups.size()), stats.p());
  fs::create_directories(opt.out_dir);

  std::optional<GroundTruth> truth;
  if (!truth_path.empty()) truth = io::read_truth_json(truth_path);

  std::ofstream trace_csv(fs::path(opt.out_dir) / "trace.csv");
  trace_csv << "sweep,i,j,component_index,value\n";
  std::ofstream diag_csv;
  if (diag_trace) {
    diag_csv.open(fs::path(opt.out_dir) / "diag_trace.csv");
    diag_csv << "sweep,k,i,value\n";
  }
  std::ofstream kappa_csv;
  std::vector<std::uint32_t> truth_masks;
  if (truth) {
    truth_masks = truth->edge_mask;
    kappa_csv.open(fs::path(opt.out_dir) / "kappa_or_stability.csv");
    kappa_csv << "sweep,kappa\n";
  }

  const SweepObserver observer = [&](int sweep, const ThetaState& theta,
                                     const DiagState& delta) {
    for (int e = 0; e < edge_count(spec.p); ++e) {
      const Edge ij = edge_at(e, spec.p);
      const EdgeCoefficients& coef = theta.edge(e);
      trace_csv << sweep << ',' << ij.i + 1 << ',' << ij.j + 1 << ','
                << coef.active_component << ','
                << io::format_double(coef.value) << "\n";
    }
    if (diag_trace) {
      for (int k = 0; k < spec.K; ++k)
        for (int i = 0; i < spec.p; ++i)
          diag_csv << sweep << ',' << k + 1 << ',' << i + 1 << ','
                   << io::format_double(delta.get(k, i)) << "\n";
    }
    if (truth) {
      kappa_csv << sweep << ','
                << io::format_double(kappa(pattern_masks(theta, spec), truth_masks))
                << "\n";
    }
  };

  const SelectionTrace trace =
      run_chain(stats, spec, opt.chain, opt.hyper, opt.prior, observer);
  const FitResult fit = majority_vote(trace, opt.ci_level);

  io::write_fit_json(fs::path(opt.out_dir) / "fit.json", fit);
  write_edges_by_component(fs::path(opt.out_dir) / "edges_by_component.csv", fit);
  if (!truth)
    write_stability_csv(fs::path(opt.out_dir) / "kappa_or_stability.csv", trace);
  return 0;
}

int cmd_simulate(const std::string& design, int p, long n, std::uint64_t seed,
                 double sparsity, double shared_fraction,
                 const std::string& out_dir) {
  Rng rng = make_rng(seed, StreamTag::kSimulate);
  GroundTruth truth;
  if (design == "ar2_chain_k4") {
    truth = gen_ar2_chain_k4(p, rng);
  } else if (design == "random_shared_k4") {
    truth = gen_random_shared(p, sparsity, shared_fraction, 4, rng);
  } else if (design == "block_k6") {
    truth = gen_block_k6(p, rng);
  } else {
    throw InvalidArgument("unknown design \"" + design + "\"");
  }

  fs::create_directories(out_dir);
  const std::vector<long> sizes(truth.spec.K, n);
  const std::vector<Eigen::MatrixXd> data = sample_groups(truth, sizes, rng);

  std::vector<std::string> columns;
  for (int i = 1; i <= p; ++i) columns.push_back("var" + std::to_string(i));

  io::Manifest manifest;
  manifest.center = false;  // mean-zero synthetic draws
  for (int k = 0; k < truth.spec.K; ++k) {
    const std::string name = "group" + std::to_string(k + 1);
    const fs::path file = fs::path(out_dir) / (name + ".csv");
    io::write_csv_matrix(file, data[k], columns);
    manifest.groups.push_back({name, file});
  }
  io::write_manifest(fs::path(out_dir) / "manifest.json", manifest);
  io::write_truth_json(fs::path(out_dir) / "truth.json", truth, design);
  io::write_truth_edges_csv(fs::path(out_dir) / "truth_edges.csv", truth);
  return 0;
}

int cmd_screen(CommonFitOptions& opt, double alpha, int pair_burnin,
               int pair_samples, int max_rounds) {
  finish_options(opt);
  io::Manifest manifest;
  const GroupStats stats = load_groups(opt, manifest);
  fs::create_directories(opt.out_dir);

  ScreenConfig cfg;
  cfg.chain = opt.chain;
  cfg.pairwise_chain = opt.chain;
  cfg.pairwise_chain.burnin = pair_burnin;
  cfg.pairwise_chain.samples = pair_samples;
  cfg.hyper = opt.hyper;
  cfg.prior = opt.prior;
  cfg.alpha = alpha;
  cfg.max_rounds = max_rounds;
  cfg.jobs = opt.jobs;

  const ScreenResult result = iterative_reduce(stats, cfg);

  // screen_report.json
  {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const ScreenEntry& e : result.report.entries)
      entries.push_back({{"component", e.component.members()},
                         {"count", e.edge_count},
                         {"active", e.active},
                         {"stage", e.stage}});
    nlohmann::ordered_json inactive = nlohmann::ordered_json::array();
    for (const GroupSet& c : result.inactive_pairs)
      inactive.push_back(c.members());
    nlohmann::ordered_json j{{"alpha", alpha},
                             {"entries", std::move(entries)},
                             {"inactive_pairs", std::move(inactive)}};
    std::ofstream out(fs::path(opt.out_dir) / "screen_report.json");
    out << j.dump(2) << "\n";
  }
  // barplot.csv
  {
    std::ofstream out(fs::path(opt.out_dir) / "barplot.csv");
    out << "stage,component,count\n";
    for (const ScreenEntry& e : result.report.entries)
      out << e.stage << ',' << io::component_label(e.component) << ','
          << e.edge_count << "\n";
  }
  {
    std::ofstream out(fs::path(opt.out_dir) / "final_spec.json");
    out << io::spec_to_json(result.final_spec) << "\n";
  }
  io::write_fit_json(fs::path(opt.out_dir) / "fit.json", result.final_fit);
  write_edges_by_component(fs::path(opt.out_dir) / "edges_by_component.csv",
                           result.final_fit);
  return 0;
}

int cmd_score(const std::string& fit_path, const std::string& truth_path,
              const std::string& out_dir) {
  const io::LoadedFit fit = io::read_fit_json(fit_path);
  const GroundTruth truth = io::read_truth_json(truth_path);
  if (truth.spec.p != fit.spec.p || truth.spec.K != fit.spec.K)
    throw InvalidArgument("score: fit and truth dimensions do not match");
  fs::create_directories(out_dir);
  std::ofstream out(fs::path(out_dir) / "score.csv");
  write_score_csv(out, fit.masks, truth, fit.spec);
  std::ifstream back(fs::path(out_dir) / "score.csv");
  std::cout << back.rdbuf();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian joint network selection across related groups"};
  app.require_subcommand(1);

  CommonFitOptions fit_opt;
  std::string fit_truth;
  bool fit_diag_trace = false;
  CLI::App* fit = app.add_subcommand("fit", "run the sampler on CSV data");
  add_chain_options(fit, fit_opt);
  fit->add_option("--truth", fit_truth,
                  "truth JSON; emits a kappa time series instead of the "
                  "stability table");
  fit->add_flag("--diag-trace", fit_diag_trace, "also stream diag_trace.csv");

  std::string sim_design, sim_out;
  int sim_p = 40;
  long sim_n = 200;
  std::uint64_t sim_seed = 0;
  double sim_sparsity = 0.95, sim_shared = 0.5;
  CLI::App* sim = app.add_subcommand("simulate", "generate a synthetic dataset");
  sim->add_option("--design", sim_design,
                  "ar2_chain_k4|random_shared_k4|block_k6")
      ->required();
  sim->add_option("--p", sim_p, "variable count")->required();
  sim->add_option("--n", sim_n, "observations per group")->required();
  sim->add_option("--seed", sim_seed, "RNG seed")->required();
  sim->add_option("--out", sim_out, "output directory")->required();
  sim->add_option("--sparsity", sim_sparsity,
                  "zero share for random_shared_k4 (default 0.95)");
  sim->add_option("--shared-fraction", sim_shared,
                  "shared share for random_shared_k4 (default 0.5)");

  CommonFitOptions screen_opt;
  double screen_alpha = 0.2;
  int pair_burnin = 1000, pair_samples = 1000, max_rounds = 5;
  CLI::App* screen =
      app.add_subcommand("screen", "pairwise screening and reduced refits");
  add_chain_options(screen, screen_opt);
  screen->add_option("--alpha", screen_alpha,
                     "inactive threshold relative to the max count (default 0.2)");
  screen->add_option("--pair-burnin", pair_burnin,
                     "burn-in for pairwise fits (default 1000)");
  screen->add_option("--pair-samples", pair_samples,
                     "retained sweeps for pairwise fits (default 1000)");
  screen->add_option("--max-rounds", max_rounds,
                     "maximum reduce rounds (default 5)");

  std::string score_fit, score_truth, score_out;
  CLI::App* score = app.add_subcommand("score", "accuracy table against a truth");
  score->add_option("--fit", score_fit, "fit.json")->required();
  score->add_option("--truth", score_truth, "truth.json")->required();
  score->add_option("--out", score_out, "output directory")->required();

  try {
    app.parse(argc, argv);
    if (fit->parsed()) return cmd_fit(fit_opt, fit_truth, fit_diag_trace);
    if (sim->parsed())
      return cmd_simulate(sim_design, sim_p, sim_n, sim_seed, sim_sparsity,
                          sim_shared, sim_out);
    if (screen->parsed())
      return cmd_screen(screen_opt, screen_alpha, pair_burnin, pair_samples,
                        max_rounds);
    if (score->parsed()) return cmd_score(score_fit, score_truth, score_out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "bjns: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "bjns: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
