// Command-line front end: run experiments, validate configs, and replay
// recorded scenario traces.
//
// Exit codes: 0 success, 1 configuration or input-validation error,
// 2 I/O or other runtime failure.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tdf/config.hpp"
#include "tdf/experiment.hpp"
#include "tdf/trace_io.hpp"

namespace {

void print_result(const tdf::ExperimentConfig& cfg,
                  const tdf::ExperimentResult& result) {
  for (const auto& [context, outcome] : result.contexts) {
    std::printf("context %s\n", context.c_str());
    for (const auto& [cid, e] : outcome.single_eers) {
      std::printf("  single %-12s eer %6.2f%%\n", cid.c_str(), 100.0 * e);
    }
    for (const auto& [name, a] : outcome.approaches) {
      std::printf("  fused  %-12s eer %6.2f%%  score calcs/trial %llu\n",
                  name.c_str(), 100.0 * a.eer,
                  static_cast<unsigned long long>(a.score_calcs_per_trial));
    }
  }
  std::printf("artifacts written to %s\n", cfg.out_dir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-aware classifier scheduling and score-fusion "
               "experiments for continuous authentication"};
  app.require_subcommand(1);

  std::string config_path;
  std::string trace_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::size_t trials = 0;

  CLI::App* run =
      app.add_subcommand("run", "Run the experiment a config describes");
  run->add_option("config", config_path, "experiment config file")->required();
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "override the config's RNG seed");
  CLI::Option* out_opt = run->add_option("--out-dir", out_dir,
                                         "override the output directory");
  CLI::Option* trials_opt =
      run->add_option("--trials", trials, "override the trial count");

  CLI::App* replay = app.add_subcommand(
      "replay", "Re-drive a scenario from a recorded score trace");
  replay->add_option("config", config_path, "experiment config file")
      ->required();
  replay->add_option("trace", trace_path, "recorded score trace (csv)")
      ->required();
  CLI::Option* r_seed_opt =
      replay->add_option("--seed", seed, "override the config's RNG seed");
  CLI::Option* r_out_opt = replay->add_option("--out-dir", out_dir,
                                              "override the output directory");

  CLI::App* validate =
      app.add_subcommand("validate", "Parse and validate a config file");
  validate->add_option("config", config_path, "experiment config file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // --help exits 0; usage errors exit nonzero
  }

  try {
    tdf::ExperimentConfig cfg = tdf::parse_config_file(config_path);
    if (seed_opt->count() > 0 || r_seed_opt->count() > 0) {
      cfg.seed = seed;
      if (cfg.scenario.has_value()) {
        cfg.scenario->seed = seed;
      }
    }
    if (out_opt->count() > 0 || r_out_opt->count() > 0) {
      cfg.out_dir = out_dir;
    }
    if (trials_opt->count() > 0) {
      cfg.trials = trials;
    }

    if (run->parsed()) {
      const tdf::ExperimentResult result = tdf::run_experiment(cfg);
      print_result(cfg, result);
    } else if (replay->parsed()) {
      const auto arrivals = tdf::parse_trace_file(trace_path);
      const tdf::LoopRun rerun = tdf::run_replay(cfg, arrivals);
      std::printf("replayed %zu ticks, %zu score arrivals -> %s/replay_trace.csv\n",
                  rerun.trace.size(), arrivals.size(), cfg.out_dir.c_str());
    } else {
      tdf::validate_config(cfg);
      std::printf("OK\n");
    }
    return 0;
  } catch (const tdf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const tdf::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
