#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "tdf/baselines.hpp"
#include "tdf/core.hpp"
#include "tdf/fusion.hpp"
#include "tdf/scheduler.hpp"

namespace tdf {

enum class SubjectLabel { genuine, impostor };

/// Equal-variance Gaussian score pair: impostor scores ~ N(0, 1), genuine
/// scores ~ N(genuine_mu, 1). Its standalone EER has the closed form
/// Phi(-genuine_mu / 2), which is what makes exact calibration possible.
struct GaussianPair {
  double genuine_mu = 0.0;
};

/// Score models for every (classifier, context) cell of an experiment.
struct ScoreModel {
  std::map<ContextLabel, std::map<ClassifierId, GaussianPair>> cells;

  /// Throws ConfigError when the cell is missing.
  [[nodiscard]] const GaussianPair& at(const ClassifierId& cid,
                                       const ContextLabel& context) const;
};

/// genuine_mu for which the model's EER equals target_eer, i.e.
/// -2 * Phi^-1(target_eer). Throws ValidationError outside (0, 0.5).
[[nodiscard]] double calibrate(double target_eer);

/// Analytic EER of a calibrated pair: Phi(-genuine_mu / 2).
[[nodiscard]] double model_eer(double genuine_mu);

/// Uniform draw in the open interval (0, 1): 53 random bits, offset half a
/// step, so the normal quantile below never sees 0 or 1.
[[nodiscard]] double uniform_open(std::mt19937_64& rng);

/// Standard normal draw by inverse-CDF transform. Avoids the standard
/// library's normal_distribution, whose output is implementation-defined;
/// this sequence is identical on every platform.
[[nodiscard]] double normal_draw(std::mt19937_64& rng);

/// One score draw from the labeled distribution of the (cid, context) cell.
[[nodiscard]] double draw_score(const ScoreModel& model,
                                const ClassifierId& cid,
                                const ContextLabel& context, SubjectLabel label,
                                std::mt19937_64& rng);

/// FNV-1a 64-bit hash, used to fold string identities into seeds.
[[nodiscard]] std::uint64_t hash_tag(std::string_view tag);

/// Splitmix64-style mixing of a root seed with distinguishing parts; every
/// distinct part list yields an independent, reproducible stream seed.
[[nodiscard]] std::uint64_t mix_seed(std::uint64_t root,
                                     std::initializer_list<std::uint64_t> parts);

[[nodiscard]] std::mt19937_64 seeded_engine(
    std::uint64_t root, std::initializer_list<std::uint64_t> parts);

/// The single draw shared by trial construction and standalone-classifier
/// evaluation: trial `trial` of `label` role, sampling instant `instant`.
/// Keyed so that every approach evaluating the same cell sees the same
/// scores, which makes cross-approach EER comparisons paired rather than
/// independent.
[[nodiscard]] double cell_draw(const ScoreModel& model, std::uint64_t seed,
                               const ContextLabel& context,
                               const ClassifierId& cid, std::uint64_t trial,
                               SubjectLabel label, std::uint64_t instant);

/// How an approach fuses one authentication attempt.
struct ApproachSpec {
  enum class Kind { max_rule, sum_rule, cwma, ours };
  Kind kind = Kind::ours;
  int k = 1;  // sampling instants for `ours`; ignored otherwise

  /// Parses "max", "sum", "cwma", "our_1x" .. "our_9x".
  /// Throws ConfigError on anything else.
  [[nodiscard]] static ApproachSpec parse(std::string_view name);
  [[nodiscard]] std::string name() const;
};

/// Everything trial construction needs besides the score model.
struct TrialConfig {
  ClassifierProfile profile;
  WindowPolicy windows;
  std::map<ContextLabel, NormTable> norms;  // per-context fitted z-scores
  double th_p = 0.9;
  Duration dt_delay = 1000;
  CwmaWeights cwma;  // needed only by the cwma approach
};

struct ContextTrials {
  std::vector<double> genuine;   // fused score per genuine trial
  std::vector<double> impostor;  // fused score per impostor trial
  std::uint64_t score_calcs_per_trial = 0;
};

struct TrialSet {
  std::map<ContextLabel, ContextTrials> by_context;
};

/// Builds n_trials genuine and n_trials impostor fused scores per context.
///
/// Baselines draw one score from every classifier at a single instant and
/// fuse the normalized values with their rule. The scheduled approach runs
/// the scheduler at k successive instants spaced dt_delay apart in its
/// steady state (projected lock instant far away, so no classifier is
/// time-critical), records the selected classifiers' raw scores, and fuses
/// with the windowed two-dimensional rule.
[[nodiscard]] TrialSet build_trials(const ScoreModel& model,
                                    const ApproachSpec& approach,
                                    std::span<const ContextLabel> contexts,
                                    std::size_t n_trials,
                                    const TrialConfig& config,
                                    std::uint64_t seed);

}  // namespace tdf
