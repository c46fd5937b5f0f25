#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "tdf/baselines.hpp"
#include "tdf/eval.hpp"

using namespace tdf;

namespace {

CwmaTrainingData gaussian_training(std::mt19937_64& rng, std::size_t k,
                                   std::size_t n, double separation) {
  CwmaTrainingData data;
  std::normal_distribution<double> gen(separation, 1.0);
  std::normal_distribution<double> imp(0.0, 1.0);
  for (std::size_t j = 0; j < k; ++j) {
    data.cids.push_back("c" + std::to_string(j));
    std::vector<double> g(n);
    std::vector<double> i(n);
    for (std::size_t t = 0; t < n; ++t) {
      g[t] = gen(rng);
      i[t] = imp(rng);
    }
    data.genuine.push_back(std::move(g));
    data.impostor.push_back(std::move(i));
  }
  return data;
}

double uniform_weights_eer(const CwmaTrainingData& data) {
  const std::size_t k = data.cids.size();
  std::vector<double> g(data.genuine.front().size(), 0.0);
  std::vector<double> i(data.impostor.front().size(), 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t t = 0; t < g.size(); ++t) {
      g[t] += data.genuine[j][t];
    }
    for (std::size_t t = 0; t < i.size(); ++t) {
      i[t] += data.impostor[j][t];
    }
  }
  return eer(g, i);
}

}  // namespace

TEST_SUITE("baselines") {
  TEST_CASE("max rule") {
    const std::vector<double> scores{0.1, 0.9, 0.4};
    CHECK(fuse_max(scores) == 0.9);
    const std::vector<double> single{0.3};
    CHECK(fuse_max(single) == 0.3);
    const std::vector<double> negatives{-2.0, -1.0};
    CHECK(fuse_max(negatives) == -1.0);
    const std::vector<double> empty{};
    CHECK_THROWS_AS((void)fuse_max(empty), ValidationError);
  }

  TEST_CASE("sum rule") {
    const std::vector<double> scores{0.1, 0.9, 0.4};
    CHECK(fuse_sum(scores) == doctest::Approx(1.4));
    const std::vector<double> single{0.3};
    CHECK(fuse_sum(single) == 0.3);
    const std::vector<double> cancel{1.0, -1.0};
    CHECK(fuse_sum(cancel) == 0.0);
    const std::vector<double> empty{};
    CHECK_THROWS_AS((void)fuse_sum(empty), ValidationError);
  }

  TEST_CASE("weighted fusion") {
    CwmaWeights w;
    w.weights["ctx"]["a"] = 1.0;
    w.weights["ctx"]["b"] = 0.0;
    CHECK(cwma_fuse(w, "ctx", {{"a", 0.7}, {"b", 0.3}}) ==
          doctest::Approx(0.7));

    CwmaWeights even;
    even.weights["ctx"]["a"] = 0.5;
    even.weights["ctx"]["b"] = 0.5;
    CHECK(cwma_fuse(even, "ctx", {{"a", 0.2}, {"b", 0.8}}) ==
          doctest::Approx(0.5));

    CwmaWeights ones;
    ones.weights["ctx"]["a"] = 1.0;
    ones.weights["ctx"]["b"] = 1.0;
    const std::vector<double> plain{0.2, 0.8};
    CHECK(cwma_fuse(ones, "ctx", {{"a", 0.2}, {"b", 0.8}}) ==
          doctest::Approx(fuse_sum(plain)));

    CHECK_THROWS_AS((void)cwma_fuse(w, "other", {{"a", 0.1}}), ConfigError);
    CHECK_THROWS_AS((void)cwma_fuse(w, "ctx", {{"zz", 0.1}}), ConfigError);
  }

  TEST_CASE("grid of step 0.5 over two classifiers has nine candidates") {
    std::mt19937_64 rng(61);
    const auto data = gaussian_training(rng, 2, 50, 2.0);
    const CwmaTrainResult result = cwma_train_context(data, 0.5);
    CHECK(result.candidates == 9);
  }

  TEST_CASE("single-classifier training returns the smallest positive weight") {
    std::mt19937_64 rng(67);
    const auto data = gaussian_training(rng, 1, 100, 2.0);
    const CwmaTrainResult result = cwma_train_context(data, 0.02);
    // Weight 0 collapses every score to zero (EER one half); all positive
    // weights are rank-equivalent, so the lexicographic rule returns the
    // smallest one.
    REQUIRE(result.weights.size() == 1);
    CHECK(result.weights[0] == doctest::Approx(0.02));
  }

  TEST_CASE("a pure-noise classifier is trained to weight zero") {
    std::mt19937_64 rng(71);
    CwmaTrainingData data;
    data.cids = {"good", "noise"};
    const std::size_t n = 200;
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> g(n);
    std::vector<double> i(n);
    std::vector<double> gn(n);
    std::vector<double> in(n);
    for (std::size_t t = 0; t < n; ++t) {
      g[t] = 10.0 + noise(rng);  // separated by 10 sigma: zero overlap
      i[t] = noise(rng);
      gn[t] = noise(rng);
      in[t] = noise(rng);
    }
    data.genuine = {g, gn};
    data.impostor = {i, in};
    const CwmaTrainResult result = cwma_train_context(data, 0.02);
    CHECK(result.training_eer == 0.0);
    CHECK(result.weights[1] == 0.0);  // noise contributes nothing
    CHECK(result.weights[0] > 0.0);
  }

  TEST_CASE("training result is a true grid minimizer") {
    std::mt19937_64 rng(73);
    const auto data = gaussian_training(rng, 2, 80, 1.0);
    const double step = 0.1;
    const CwmaTrainResult result = cwma_train_context(data, step);

    double best = 2.0;
    for (int a = 0; a <= 10; ++a) {
      for (int b = 0; b <= 10; ++b) {
        std::vector<double> g(80), i(80);
        for (std::size_t t = 0; t < 80; ++t) {
          g[t] = a / 10.0 * data.genuine[0][t] + b / 10.0 * data.genuine[1][t];
          i[t] = a / 10.0 * data.impostor[0][t] + b / 10.0 * data.impostor[1][t];
        }
        best = std::min(best, eer(g, i));
      }
    }
    CHECK(result.training_eer == doctest::Approx(best));
    CHECK(result.training_eer <= uniform_weights_eer(data));
  }

  TEST_CASE("per-context training runs everything and keeps labels apart") {
    std::mt19937_64 rng(79);
    std::map<ContextLabel, CwmaTrainingData> training;
    training["ctx1"] = gaussian_training(rng, 2, 60, 2.5);
    training["ctx2"] = gaussian_training(rng, 2, 60, 0.5);
    const auto results = cwma_train(training, 0.1);
    REQUIRE(results.size() == 2);
    // The widely separated context trains to a lower EER.
    CHECK(results.at("ctx1").training_eer <= results.at("ctx2").training_eer);
    const CwmaWeights w = assemble_cwma_weights(training, results);
    CHECK(w.weights.at("ctx1").size() == 2);
    CHECK(w.weights.at("ctx2").size() == 2);
  }

  TEST_CASE("invalid grid steps are rejected") {
    std::mt19937_64 rng(83);
    const auto data = gaussian_training(rng, 2, 10, 1.0);
    CHECK_THROWS_AS((void)cwma_train_context(data, 0.0), ValidationError);
    CHECK_THROWS_AS((void)cwma_train_context(data, 0.3), ValidationError);
    CHECK_THROWS_AS((void)cwma_train_context(data, 1.5), ValidationError);
  }
}
