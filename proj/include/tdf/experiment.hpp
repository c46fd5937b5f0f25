#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tdf/authloop.hpp"
#include "tdf/baselines.hpp"
#include "tdf/config.hpp"
#include "tdf/eval.hpp"
#include "tdf/synthdata.hpp"

namespace tdf {

/// Raw training draws for every (context, classifier) cell, used to fit
/// normalization and to train the weighted-sum baseline. Draw streams are
/// keyed independently of the evaluation streams, so training and test data
/// never share samples.
struct TrainingDraws {
  std::map<ContextLabel, std::map<ClassifierId, std::vector<double>>> genuine;
  std::map<ContextLabel, std::map<ClassifierId, std::vector<double>>> impostor;
};

[[nodiscard]] TrainingDraws draw_training(const ScoreModel& model,
                                          std::uint64_t seed,
                                          std::size_t per_label);

/// Per-context z-score parameters fitted on the pooled genuine+impostor
/// training draws of each (context, classifier) cell.
[[nodiscard]] std::map<ContextLabel, NormTable> fit_norms(
    const TrainingDraws& draws);

/// One table across contexts: per classifier, pooled over every context's
/// training draws. Used by the authentication loop, whose history mixes
/// contexts.
[[nodiscard]] NormTable fit_pooled_norms(const TrainingDraws& draws);

/// Normalized per-context training columns for the weighted-sum search.
[[nodiscard]] std::map<ContextLabel, CwmaTrainingData> cwma_training_from(
    const TrainingDraws& draws,
    const std::map<ContextLabel, NormTable>& norms);

/// Everything derived from a config before any trial runs: the calibrated
/// score model, the scheduling profile, windows, fitted normalization, and
/// (when the weighted-sum baseline is requested) its trained weights.
struct ExperimentSetup {
  ScoreModel model;
  ClassifierProfile profile;
  WindowPolicy windows;
  std::map<ContextLabel, NormTable> norms;  // per-context, for trials
  NormTable loop_norms;                     // cross-context, for the loop
  std::map<ContextLabel, CwmaTrainResult> cwma;  // empty unless trained
  CwmaWeights cwma_weights;
};

/// Validates cfg and derives the setup. The weighted-sum baseline is
/// trained only when `train_cwma` is set and "cwma" is among the
/// approaches; scenario replays pass false to skip the grid search.
[[nodiscard]] ExperimentSetup prepare_experiment(const ExperimentConfig& cfg,
                                                 bool train_cwma = true);

struct ApproachOutcome {
  double eer = 0.0;
  std::uint64_t score_calcs_per_trial = 0;
  DetCurve det;
};

struct ContextOutcome {
  std::map<std::string, ApproachOutcome> approaches;  // keyed by name
  /// Standalone EER of each classifier on the same instant-0 draws the
  /// single-sample approaches see.
  std::map<ClassifierId, double> single_eers;
};

struct ExperimentResult {
  ExperimentSetup setup;
  std::map<ContextLabel, ContextOutcome> contexts;
};

/// Pure evaluation: fits the setup, builds trials for every (context,
/// approach) pair, and measures error rates. Identical configs give
/// identical results, independent of platform thread scheduling.
[[nodiscard]] ExperimentResult evaluate_experiment(const ExperimentConfig& cfg);

/// evaluate_experiment plus artifacts under cfg.out_dir (created if
/// missing):
///   det_<context>_<approach>.csv   DET curve per pair
///   summary.json                   error rates, costs, trained weights
///   manifest.json                  config hash, seed, build identity
/// and, when the config declares a scenario:
///   loop_trace.csv                 per-tick authentication-loop trace
///   scores.csv                     every delivered score, replayable
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Re-drives the scenario against recorded score arrivals and writes
/// replay_trace.csv under cfg.out_dir. A replay of a run's scores.csv
/// reproduces that run's loop_trace.csv rows exactly. Requires a scenario.
LoopRun run_replay(const ExperimentConfig& cfg,
                   std::span<const ScoreRecord> arrivals);

}  // namespace tdf
