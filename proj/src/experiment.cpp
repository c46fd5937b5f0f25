#include "tdf/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "tdf/kernels.hpp"
#include "tdf/trace_io.hpp"

namespace tdf {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t label_role(SubjectLabel label) {
  return label == SubjectLabel::genuine ? 1ull : 0ull;
}

std::vector<double> training_column(const ScoreModel& model,
                                    std::uint64_t seed,
                                    const ContextLabel& context,
                                    const ClassifierId& cid,
                                    SubjectLabel label, std::size_t n) {
  auto rng = seeded_engine(seed, {hash_tag("train"), hash_tag(context),
                                  hash_tag(cid), label_role(label)});
  std::vector<double> out(n);
  for (double& v : out) {
    v = draw_score(model, cid, context, label, rng);
  }
  return out;
}

}  // namespace

TrainingDraws draw_training(const ScoreModel& model, std::uint64_t seed,
                            std::size_t per_label) {
  if (per_label < 2) {
    throw ValidationError("training needs at least 2 draws per label");
  }
  TrainingDraws out;
  for (const auto& [context, cells] : model.cells) {
    for (const auto& [cid, pair] : cells) {
      out.genuine[context][cid] = training_column(
          model, seed, context, cid, SubjectLabel::genuine, per_label);
      out.impostor[context][cid] = training_column(
          model, seed, context, cid, SubjectLabel::impostor, per_label);
    }
  }
  return out;
}

std::map<ContextLabel, NormTable> fit_norms(const TrainingDraws& draws) {
  std::map<ContextLabel, NormTable> out;
  for (const auto& [context, cells] : draws.genuine) {
    for (const auto& [cid, genuine] : cells) {
      const auto& impostor = draws.impostor.at(context).at(cid);
      std::vector<double> pooled;
      pooled.reserve(genuine.size() + impostor.size());
      pooled.insert(pooled.end(), genuine.begin(), genuine.end());
      pooled.insert(pooled.end(), impostor.begin(), impostor.end());
      out[context][cid] = zscore_fit(pooled);
    }
  }
  return out;
}

NormTable fit_pooled_norms(const TrainingDraws& draws) {
  std::map<ClassifierId, std::vector<double>> pooled;
  for (const auto& [context, cells] : draws.genuine) {
    for (const auto& [cid, col] : cells) {
      auto& p = pooled[cid];
      p.insert(p.end(), col.begin(), col.end());
      const auto& imp = draws.impostor.at(context).at(cid);
      p.insert(p.end(), imp.begin(), imp.end());
    }
  }
  NormTable out;
  for (const auto& [cid, scores] : pooled) {
    out[cid] = zscore_fit(scores);
  }
  return out;
}

std::map<ContextLabel, CwmaTrainingData> cwma_training_from(
    const TrainingDraws& draws,
    const std::map<ContextLabel, NormTable>& norms) {
  std::map<ContextLabel, CwmaTrainingData> out;
  for (const auto& [context, cells] : draws.genuine) {
    CwmaTrainingData data;
    for (const auto& [cid, col] : cells) {
      data.cids.push_back(cid);
    }
    const NormTable& table = norms.at(context);
    for (const auto& cid : data.cids) {
      auto normalize = [&](const std::vector<double>& col) {
        std::vector<double> z(col.size());
        const NormParams& p = table.at(cid);
        kernels::zscore_apply(col.data(), col.size(), p.mu, p.sigma, z.data());
        return z;
      };
      data.genuine.push_back(normalize(cells.at(cid)));
      data.impostor.push_back(normalize(draws.impostor.at(context).at(cid)));
    }
    out.emplace(context, std::move(data));
  }
  return out;
}

ExperimentSetup prepare_experiment(const ExperimentConfig& cfg,
                                   bool train_cwma) {
  validate_config(cfg);

  ExperimentSetup setup;
  for (const auto& [label, ctx] : cfg.contexts) {
    setup.windows[label] = ctx.window_ms;
    for (const auto& [cid, target] : ctx.eer_targets) {
      setup.model.cells[label][cid].genuine_mu = calibrate(target);
    }
  }
  for (const auto& [cid, cc] : cfg.classifiers) {
    ClassifierTraits traits;
    traits.time = cc.time_ms;
    traits.cost = cc.cost;
    for (const auto& [label, ctx] : cfg.contexts) {
      // A classifier's chance of authenticating its genuine user is one
      // minus its error rate in that context.
      traits.auth_prob[label] = 1.0 - ctx.eer_targets.at(cid);
    }
    setup.profile.classifiers.emplace(cid, std::move(traits));
  }

  const TrainingDraws draws =
      draw_training(setup.model, cfg.seed, cfg.training_samples);
  setup.norms = fit_norms(draws);
  setup.loop_norms = cfg.norms.empty() ? fit_pooled_norms(draws) : cfg.norms;

  const bool wants_cwma =
      std::find(cfg.approaches.begin(), cfg.approaches.end(), "cwma") !=
      cfg.approaches.end();
  if (train_cwma && wants_cwma) {
    const auto training = cwma_training_from(draws, setup.norms);
    setup.cwma = cwma_train(training, cfg.grid_step);
    setup.cwma_weights = assemble_cwma_weights(training, setup.cwma);
  }
  return setup;
}

ExperimentResult evaluate_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result;
  result.setup = prepare_experiment(cfg);
  const ExperimentSetup& setup = result.setup;

  std::vector<ContextLabel> contexts;
  contexts.reserve(cfg.contexts.size());
  for (const auto& [label, ctx] : cfg.contexts) {
    contexts.push_back(label);
    result.contexts.emplace(label, ContextOutcome{});
  }

  // Standalone classifiers, on the same instant-0 draws the single-sample
  // approaches consume.
  for (const auto& context : contexts) {
    auto& outcome = result.contexts.at(context);
    for (const auto& [cid, cc] : cfg.classifiers) {
      std::vector<double> genuine(cfg.trials);
      std::vector<double> impostor(cfg.trials);
      for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
        genuine[trial] = cell_draw(setup.model, cfg.seed, context, cid, trial,
                                   SubjectLabel::genuine, 0);
        impostor[trial] = cell_draw(setup.model, cfg.seed, context, cid, trial,
                                    SubjectLabel::impostor, 0);
      }
      outcome.single_eers[cid] = eer(genuine, impostor);
    }
  }

  TrialConfig tc;
  tc.profile = setup.profile;
  tc.windows = setup.windows;
  tc.norms = setup.norms;
  tc.th_p = cfg.th_p;
  tc.dt_delay = cfg.dt_delay;
  tc.cwma = setup.cwma_weights;

  for (const auto& name : cfg.approaches) {
    const ApproachSpec spec = ApproachSpec::parse(name);
    const TrialSet trials =
        build_trials(setup.model, spec, contexts, cfg.trials, tc, cfg.seed);
    for (const auto& [context, cell] : trials.by_context) {
      ApproachOutcome outcome;
      outcome.det = det_curve(cell.genuine, cell.impostor);
      outcome.eer = eer(outcome.det);
      outcome.score_calcs_per_trial = cell.score_calcs_per_trial;
      result.contexts.at(context).approaches.emplace(name,
                                                     std::move(outcome));
    }
  }
  return result;
}

namespace {

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

void write_det_csv(const fs::path& path, const DetCurve& curve) {
  auto out = open_out(path);
  out << "threshold,far,frr\n";
  for (const auto& p : curve) {
    out << format_double(p.threshold) << ',' << format_double(p.far) << ','
        << format_double(p.frr) << '\n';
  }
  if (!out.flush()) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

json summary_json(const ExperimentConfig& cfg, const ExperimentResult& result) {
  json contexts = json::object();
  for (const auto& [context, outcome] : result.contexts) {
    json approaches = json::object();
    for (const auto& [name, a] : outcome.approaches) {
      approaches[name] = {{"eer", a.eer},
                          {"score_calcs_per_trial", a.score_calcs_per_trial}};
    }
    json singles = json::object();
    for (const auto& [cid, e] : outcome.single_eers) {
      singles[cid] = e;
    }
    json ctx = {{"approaches", approaches},
                {"single_classifier_eers", singles}};
    if (auto it = result.setup.cwma.find(context);
        it != result.setup.cwma.end()) {
      json weights = json::object();
      for (const auto& [cid, w] : result.setup.cwma_weights.weights.at(context)) {
        weights[cid] = w;
      }
      ctx["cwma_training"] = {{"training_eer", it->second.training_eer},
                              {"candidates", it->second.candidates},
                              {"weights", weights}};
    }
    contexts[context] = ctx;
  }
  return json{{"seed", cfg.seed},
              {"trials", cfg.trials},
              {"training_samples", cfg.training_samples},
              {"grid_step", cfg.grid_step},
              {"contexts", contexts}};
}

json manifest_json(const ExperimentConfig& cfg,
                   const std::vector<std::string>& outputs) {
  const char* platform =
#if defined(__x86_64__)
      "x86_64";
#elif defined(__aarch64__)
      "aarch64";
#else
      "unknown";
#endif
  const std::string compiler =
#if defined(__clang__)
      std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
      std::string("gcc ") + __VERSION__;
#else
      "unknown";
#endif
  return json{{"config_hash", hash_hex(cfg.source_hash)},
              {"seed", cfg.seed},
              {"platform", platform},
              {"compiler", compiler},
              {"kernel_backend", kernels::backend_name(kernels::active_backend())},
              {"outputs", outputs}};
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out.flush()) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

ScoreSource model_source(const ScoreModel& model, std::uint64_t seed) {
  return [&model, seed](const ClassifierId& cid, const ContextLabel& context,
                        bool genuine, TimeInstant start) {
    auto rng = seeded_engine(seed, {hash_tag("loop"), hash_tag(cid),
                                    static_cast<std::uint64_t>(start)});
    return draw_score(model, cid, context,
                      genuine ? SubjectLabel::genuine : SubjectLabel::impostor,
                      rng);
  };
}

PolicyConfig loop_policy(const ExperimentConfig& cfg,
                         const ExperimentSetup& setup) {
  PolicyConfig policy;
  policy.th_p = cfg.th_p;
  policy.th_beta = cfg.th_beta;
  policy.dt_delay = cfg.dt_delay;
  policy.windows = setup.windows;
  policy.norms = setup.loop_norms;
  return policy;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result = evaluate_experiment(cfg);

  fs::create_directories(cfg.out_dir);
  std::vector<std::string> outputs;

  for (const auto& [context, outcome] : result.contexts) {
    for (const auto& [name, a] : outcome.approaches) {
      const std::string file = "det_" + context + "_" + name + ".csv";
      write_det_csv(fs::path(cfg.out_dir) / file, a.det);
      outputs.push_back(file);
    }
  }

  write_json(fs::path(cfg.out_dir) / "summary.json",
             summary_json(cfg, result));
  outputs.emplace_back("summary.json");

  if (cfg.scenario.has_value()) {
    const LoopRun run =
        run_scenario(*cfg.scenario, loop_policy(cfg, result.setup),
                     result.setup.profile,
                     model_source(result.setup.model, cfg.seed));
    {
      auto out = open_out(fs::path(cfg.out_dir) / "loop_trace.csv");
      write_loop_trace(out, run.trace);
    }
    {
      auto out = open_out(fs::path(cfg.out_dir) / "scores.csv");
      write_trace(out, run.scores);
    }
    outputs.emplace_back("loop_trace.csv");
    outputs.emplace_back("scores.csv");
  }

  outputs.emplace_back("manifest.json");
  write_json(fs::path(cfg.out_dir) / "manifest.json",
             manifest_json(cfg, outputs));
  return result;
}

LoopRun run_replay(const ExperimentConfig& cfg,
                   std::span<const ScoreRecord> arrivals) {
  if (!cfg.scenario.has_value()) {
    throw ConfigError("replay needs a [scenario] section in the config");
  }
  const ExperimentSetup setup =
      prepare_experiment(cfg, /*train_cwma=*/false);
  LoopRun run = replay_scenario(*cfg.scenario, loop_policy(cfg, setup),
                                setup.profile, arrivals);
  fs::create_directories(cfg.out_dir);
  auto out = open_out(fs::path(cfg.out_dir) / "replay_trace.csv");
  write_loop_trace(out, run.trace);
  if (!out.flush()) {
    throw std::runtime_error("failed writing replay_trace.csv");
  }
  return run;
}

}  // namespace tdf
