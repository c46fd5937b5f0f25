#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "tdf/core.hpp"

namespace tdf {

/// Context-dependent per-classifier weights in [0, 1] for the weighted-sum
/// baseline.
struct CwmaWeights {
  std::map<ContextLabel, std::map<ClassifierId, double>> weights;
};

/// Maximum of the normalized scores. Throws ValidationError on empty input
/// (baselines always run every classifier at one instant).
[[nodiscard]] double fuse_max(std::span<const double> normalized_scores);

/// Sum of the normalized scores. Throws ValidationError on empty input.
[[nodiscard]] double fuse_sum(std::span<const double> normalized_scores);

/// Weighted sum using the context's trained weights. Throws ConfigError
/// when a (context, cid) weight is missing.
[[nodiscard]] double cwma_fuse(
    const CwmaWeights& weights, const ContextLabel& context,
    const std::map<ClassifierId, double>& normalized_scores);

/// Per-context training data: one column of normalized scores per
/// classifier, columns aligned with `cids`; every genuine column has the
/// same number of rows, likewise every impostor column.
struct CwmaTrainingData {
  std::vector<ClassifierId> cids;
  std::vector<std::vector<double>> genuine;
  std::vector<std::vector<double>> impostor;
};

struct CwmaTrainResult {
  std::vector<double> weights;  // aligned with the training data's cids
  double training_eer = 0.0;
  std::size_t candidates = 0;  // grid vectors evaluated
};

/// Exhaustive search over the weight grid {0, step, 2*step, ..., 1}^k for
/// the vector minimizing training-set EER; ties go to the lexicographically
/// smallest vector (the enumeration order, keeping only strict
/// improvements). grid_step must divide 1 evenly.
[[nodiscard]] CwmaTrainResult cwma_train_context(const CwmaTrainingData& data,
                                                 double grid_step = 0.02);

/// cwma_train_context for every context, run in parallel across contexts.
[[nodiscard]] std::map<ContextLabel, CwmaTrainResult> cwma_train(
    const std::map<ContextLabel, CwmaTrainingData>& training,
    double grid_step = 0.02);

/// Zips per-context training results with their classifier lists into the
/// weight table cwma_fuse consumes.
[[nodiscard]] CwmaWeights assemble_cwma_weights(
    const std::map<ContextLabel, CwmaTrainingData>& training,
    const std::map<ContextLabel, CwmaTrainResult>& results);

}  // namespace tdf
