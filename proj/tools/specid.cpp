// specid: staged command line runner for spectral network identification.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "specid/error.hpp"
#include "specid/pipeline.hpp"

namespace fs = std::filesystem;
using namespace specid;

namespace {

struct Options {
  std::string config_path;
  std::string mode;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
  std::optional<double> svd_tol;
  std::string candidates;
  int sweep = 0;
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("specid");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("SPECID_LOG_LEVEL")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

ExperimentConfig resolve_config(const Options& opt) {
  std::vector<std::string> warnings;
  ExperimentConfig config;
  if (!opt.config_path.empty()) {
    config = load_config(opt.config_path, &warnings);
  } else {
    const fs::path stored = fs::path(opt.out) / artifacts::kConfig;
    if (!fs::exists(stored)) {
      throw IoError("no --config given and no resolved config found: expected " +
                    stored.string());
    }
    config = load_config(stored.string(), &warnings);
  }
  for (const auto& w : warnings) spdlog::warn("{}", w);
  if (!opt.mode.empty()) config.mode = parse_mode(opt.mode);
  if (opt.seed) config.seed = *opt.seed;
  if (opt.epsilon) config.identify.epsilon = *opt.epsilon;
  if (opt.svd_tol) config.dmd.svd_tol = *opt.svd_tol;
  config.validate();
  return config;
}

fs::path output_dir(const Options& opt, const ExperimentConfig& config) {
  if (!opt.out.empty()) return opt.out;
  if (!config.output_dir.empty()) return config.output_dir;
  throw InvalidArgument("no output directory: pass --out DIR or set output.dir");
}

void print_summary(const SpectrumReport& r) {
  std::cout << "name: " << r.config.name << "  seed: " << r.config.seed
            << "  mode: " << to_string(r.config.mode) << '\n';
  std::cout << "n=" << r.n << " m=" << r.m << " m_bar=" << r.m_bar
            << " tr(BC^T)=" << r.trace_bc << " feasible=" << (r.feasibility.feasible() ? 1 : 0)
            << '\n';
  std::cout << "estimated mu: " << r.estimated.continuous.size()
            << "  candidates: " << r.result.candidates.size()
            << "  identified: " << r.result.identification.identified.size()
            << "  output (" << to_string(r.config.identify.method)
            << "): " << r.result.spectrum.size() << '\n';
  std::cout << "oracle: max_error=" << r.oracle.max_error << " missed=" << r.oracle.missed
            << " spurious=" << r.oracle.spurious << '\n';
  if (r.result.moments) {
    const auto& m = *r.result.moments;
    std::cout << "M1_hat=" << m.m1_hat << " (exact " << r.exact_m1 << ")  M2_hat=" << m.m2_hat
              << " (exact " << r.exact_m2 << ")  lambda2_hat=" << m.lambda2_hat
              << "  lambdan_hat=" << m.lambdan_hat << '\n';
  }
}

// Stage commands. Each reads the artifacts of the previous stage from the
// output directory.

void cmd_generate(const Options& opt) {
  const auto config = resolve_config(opt);
  const auto out = output_dir(opt, config);
  fs::create_directories(out);
  artifacts::write_text(out / artifacts::kConfig, config_to_json(config) + "\n");
  const auto graph = generate_graph(config);
  artifacts::write_graph(out, graph);
  spdlog::info("wrote {} ({} nodes)", (out / artifacts::kGraph).string(), graph.size());
}

void cmd_simulate(const Options& opt) {
  const auto config = resolve_config(opt);
  const auto out = output_dir(opt, config);
  const auto graph = artifacts::read_graph(out);
  const auto snapshots = simulate_snapshots(config, make_model(config), graph);
  write_snapshot_set(out / artifacts::kSnapshots, snapshots);
  spdlog::info("wrote {} trajectories to {}", snapshots.q(),
               (out / artifacts::kSnapshots).string());
}

void cmd_dmd(const Options& opt) {
  const auto config = resolve_config(opt);
  const auto out = output_dir(opt, config);
  const auto model = make_model(config);
  RitzSpectrum estimated;
  if (config.mode == RunMode::oracle) {
    estimated = oracle_spectrum(linearize(model), artifacts::read_graph(out));
  } else {
    estimated = run_dmd(config, model, read_snapshot_set(out / artifacts::kSnapshots));
  }
  for (const auto& w : estimated.warnings) spdlog::warn("{}", w);
  artifacts::write_estimate(out, config, estimated);
  spdlog::info("wrote {} eigenvalues to {}", estimated.continuous.size(),
               (out / artifacts::kMu).string());
}

void cmd_identify(const Options& opt) {
  const auto config = resolve_config(opt);
  const auto out = output_dir(opt, config);
  const auto sys = linearize(make_model(config));
  CandidateSet candidates;
  if (!opt.candidates.empty()) {
    candidates = artifacts::read_candidates(opt.candidates, sys.m(), sys.m_bar);
  } else {
    const auto estimated = artifacts::read_estimate(out);
    candidates = build_candidate_set(sys.A, sys.coupling(), estimated.continuous,
                                     config.identify.pencil_tol);
  }
  const auto result = identify_from_candidates(config, std::move(candidates));
  for (const auto& w : result.warnings) spdlog::warn("{}", w);
  artifacts::write_identify(out, config, result);
  std::cout << "identified " << result.identification.identified.size() << " of "
            << result.candidates.size() << " candidates; " << to_string(config.identify.method)
            << " output " << result.spectrum.size() << " values\n";
}

void cmd_report(const Options& opt) {
  const auto config = resolve_config(opt);
  const auto out = output_dir(opt, config);
  const auto graph = artifacts::read_graph(out);
  const auto estimated = artifacts::read_estimate(out);
  const auto sys = linearize(make_model(config));
  auto result = identify_stage(config, sys, estimated.continuous);
  const auto report = build_report(config, graph, estimated, std::move(result));
  artifacts::write_report(out, report);
  print_summary(report);
}

void cmd_run(const Options& opt) {
  const auto config = resolve_config(opt);
  const auto out = output_dir(opt, config);
  if (opt.sweep <= 1) {
    print_summary(run_pipeline(config, out));
    return;
  }

  const int runs = opt.sweep;
  const int workers =
      std::max(1, std::min<int>(runs, static_cast<int>(std::thread::hardware_concurrency())));
  std::vector<std::optional<SpectrumReport>> reports(runs);
  std::vector<std::string> failures(runs);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < runs; i = next++) {
        ExperimentConfig local = config;
        local.seed = config.seed + static_cast<std::uint64_t>(i);
        const fs::path dir = out / ("seed_" + std::to_string(local.seed));
        try {
          reports[i] = run_pipeline(local, dir);
        } catch (const std::exception& e) {
          failures[i] = e.what();
        }
      }
    });
  }
  for (auto& t : pool) t.join();

  int failed = 0;
  std::cout << "seed,identified,max_error,missed,spurious\n";
  for (int i = 0; i < runs; ++i) {
    const auto seed = config.seed + static_cast<std::uint64_t>(i);
    if (!reports[i]) {
      ++failed;
      spdlog::error("seed {}: {}", seed, failures[i]);
      continue;
    }
    const auto& r = *reports[i];
    std::cout << seed << ',' << r.result.spectrum.size() << ',' << r.oracle.max_error << ','
              << r.oracle.missed << ',' << r.oracle.spurious << '\n';
  }
  if (failed > 0) throw Error(std::to_string(failed) + " of " + std::to_string(runs) +
                              " sweep runs failed");
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Spectral identification of network Laplacians from sparse time series"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Experiment config (JSON)");
    sub->add_option("--mode", opt.mode, "data | oracle (overrides config)")
        ->check(CLI::IsMember({"data", "oracle"}));
    sub->add_option("--out", opt.out, "Run directory");
    sub->add_option("--seed", opt.seed, "Experiment seed (overrides config)");
    sub->add_option("--epsilon", opt.epsilon, "Clustering tolerance (overrides config)");
    sub->add_option("--svd-tol", opt.svd_tol, "Relative SVD truncation for DMD");
  };

  auto* generate = app.add_subcommand("generate", "Write the resolved config and the graph");
  auto* simulate = app.add_subcommand("simulate", "Simulate snapshot trajectories");
  auto* dmd = app.add_subcommand("dmd", "Estimate the Jacobian spectrum (exact in oracle mode)");
  auto* identify = app.add_subcommand("identify", "Build candidates and identify eigenvalues");
  auto* report = app.add_subcommand("report", "Merge a run directory into report.json");
  auto* run = app.add_subcommand("run", "Run every stage");
  for (auto* sub : {generate, simulate, dmd, identify, report, run}) add_common(sub);
  identify->add_option("--candidates", opt.candidates,
                       "Candidate CSV (lambda_re,lambda_im,mu_re,mu_im) to filter instead of "
                       "mu.csv");
  run->add_option("--sweep", opt.sweep, "Run N consecutive seeds in parallel")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  struct Stage {
    CLI::App* sub;
    const char* name;
    void (*fn)(const Options&);
  };
  const Stage stages[] = {{generate, "generate", cmd_generate}, {simulate, "simulate", cmd_simulate},
                          {dmd, "dmd", cmd_dmd},                {identify, "identify", cmd_identify},
                          {report, "report", cmd_report},       {run, "run", cmd_run}};
  for (const auto& stage : stages) {
    if (!stage.sub->parsed()) continue;
    try {
      stage.fn(opt);
      return 0;
    } catch (const StageFailure& e) {
      spdlog::error("{}", e.what());
      return 1;
    } catch (const std::exception& e) {
      spdlog::error("stage '{}' failed: {}", stage.name, e.what());
      return 1;
    }
  }
  return 2;
}
