#include "tdf/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "tdf/eval.hpp"
#include "tdf/kernels.hpp"

namespace tdf {

double fuse_max(std::span<const double> normalized_scores) {
  if (normalized_scores.empty()) {
    throw ValidationError("max-rule fusion over an empty score set");
  }
  return *std::max_element(normalized_scores.begin(), normalized_scores.end());
}

double fuse_sum(std::span<const double> normalized_scores) {
  if (normalized_scores.empty()) {
    throw ValidationError("sum-rule fusion over an empty score set");
  }
  double sum = 0.0;
  for (double s : normalized_scores) {
    sum += s;
  }
  return sum;
}

double cwma_fuse(const CwmaWeights& weights, const ContextLabel& context,
                 const std::map<ClassifierId, double>& normalized_scores) {
  auto ctx = weights.weights.find(context);
  if (ctx == weights.weights.end()) {
    throw ConfigError("no trained weights for context '" + context + "'");
  }
  double sum = 0.0;
  for (const auto& [cid, score] : normalized_scores) {
    auto w = ctx->second.find(cid);
    if (w == ctx->second.end()) {
      throw ConfigError("no trained weight for classifier '" + cid +
                        "' in context '" + context + "'");
    }
    sum += w->second * score;
  }
  return sum;
}

namespace {

// Flattens per-classifier columns into one contiguous [k][n] block for the
// weighted-sum kernel.
std::vector<double> flatten(const std::vector<std::vector<double>>& cols,
                            std::size_t n) {
  std::vector<double> flat(cols.size() * n);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    std::copy(cols[j].begin(), cols[j].end(), flat.begin() + j * n);
  }
  return flat;
}

std::size_t column_rows(const std::vector<std::vector<double>>& cols,
                        const char* which) {
  if (cols.empty() || cols.front().empty()) {
    throw ValidationError(std::string("cwma training has no ") + which +
                          " scores");
  }
  const std::size_t n = cols.front().size();
  for (const auto& c : cols) {
    if (c.size() != n) {
      throw ValidationError(
          std::string("cwma training columns have uneven lengths (") + which +
          ")");
    }
  }
  return n;
}

}  // namespace

CwmaTrainResult cwma_train_context(const CwmaTrainingData& data,
                                   double grid_step) {
  const std::size_t k = data.cids.size();
  if (k == 0) {
    throw ValidationError("cwma training needs at least one classifier");
  }
  if (data.genuine.size() != k || data.impostor.size() != k) {
    throw ValidationError(
        "cwma training columns do not match the classifier list");
  }
  if (!(grid_step > 0.0 && grid_step <= 1.0)) {
    throw ValidationError("grid_step must lie in (0, 1]");
  }
  const auto m = static_cast<std::size_t>(std::llround(1.0 / grid_step));
  if (m < 1 || std::abs(static_cast<double>(m) * grid_step - 1.0) > 1e-9) {
    throw ValidationError("grid_step must divide 1 evenly");
  }

  const std::size_t ng = column_rows(data.genuine, "genuine");
  const std::size_t ni = column_rows(data.impostor, "impostor");

  double total_candidates = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    total_candidates *= static_cast<double>(m + 1);
  }
  if (total_candidates > 2e7) {
    throw ValidationError(
        "cwma grid search would enumerate more than 2e7 weight vectors; "
        "coarsen grid_step or reduce the classifier count");
  }

  // Grid values i/m rather than i*step: the top of the grid is then exactly
  // 1.0 and the all-ones (uniform) vector is exactly representable.
  std::vector<double> grid(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(m);
  }

  const std::vector<double> gflat = flatten(data.genuine, ng);
  const std::vector<double> iflat = flatten(data.impostor, ni);
  std::vector<double> gfused(ng);
  std::vector<double> ifused(ni);

  std::vector<std::size_t> idx(k, 0);  // odometer, most significant first
  std::vector<double> w(k, 0.0);
  CwmaTrainResult best;
  best.training_eer = 2.0;  // above any attainable EER
  std::size_t evaluated = 0;

  for (;;) {
    for (std::size_t j = 0; j < k; ++j) {
      w[j] = grid[idx[j]];
    }
    kernels::weighted_sum(gflat.data(), ng, w, gfused.data());
    kernels::weighted_sum(iflat.data(), ni, w, ifused.data());
    std::sort(gfused.begin(), gfused.end());
    std::sort(ifused.begin(), ifused.end());
    const double e = eer_sorted(gfused, ifused);
    ++evaluated;
    // Strict improvement only: the first minimizer in enumeration order is
    // the lexicographically smallest one.
    if (e < best.training_eer) {
      best.training_eer = e;
      best.weights = w;
    }

    // Advance the odometer (least significant digit last => lexicographic
    // order over weight vectors).
    std::size_t j = k;
    while (j > 0) {
      --j;
      if (idx[j] < m) {
        ++idx[j];
        std::fill(idx.begin() + j + 1, idx.end(), 0);
        break;
      }
      if (j == 0) {
        best.candidates = evaluated;
        return best;
      }
    }
  }
}

std::map<ContextLabel, CwmaTrainResult> cwma_train(
    const std::map<ContextLabel, CwmaTrainingData>& training,
    double grid_step) {
  if (training.empty()) {
    throw ValidationError("cwma training set is empty");
  }
  std::map<ContextLabel, std::future<CwmaTrainResult>> jobs;
  for (const auto& [context, data] : training) {
    jobs.emplace(context,
                 std::async(std::launch::async, [&data, grid_step] {
                   return cwma_train_context(data, grid_step);
                 }));
  }
  std::map<ContextLabel, CwmaTrainResult> out;
  for (auto& [context, job] : jobs) {
    out.emplace(context, job.get());
  }
  return out;
}

CwmaWeights assemble_cwma_weights(
    const std::map<ContextLabel, CwmaTrainingData>& training,
    const std::map<ContextLabel, CwmaTrainResult>& results) {
  CwmaWeights out;
  for (const auto& [context, result] : results) {
    const auto& data = training.at(context);
    auto& per_cid = out.weights[context];
    for (std::size_t j = 0; j < data.cids.size(); ++j) {
      per_cid[data.cids[j]] = result.weights[j];
    }
  }
  return out;
}

}  // namespace tdf
