#pragma once

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "tdf/core.hpp"

namespace tdf {

/// Static per-classifier tables used by the scheduler.
struct ClassifierTraits {
  /// Estimated probability that this classifier accepts the genuine user,
  /// per context (a true-acceptance rate in [0,1]).
  std::map<ContextLabel, double> auth_prob;
  /// Expected time from activation to a delivered score, ms. Must be > 0.
  Duration time = 1;
  /// Activation cost; subset cost defaults to the sum of these.
  double cost = 1.0;
};

struct ClassifierProfile {
  std::map<ClassifierId, ClassifierTraits> classifiers;
};

struct SchedulerParams {
  double th_p = 0.9;         // combined-probability threshold, in [0,1]
  Duration dt_delay = 1000;  // delay between loop invocations, ms; > 0
};

/// Cost of activating a set of classifiers (cids arrive sorted,
/// duplicate-free). Must be monotone: adding a classifier never lowers the
/// cost. The default is the sum of per-classifier costs.
using SetCostFn =
    std::function<double(const ClassifierProfile&, std::span<const ClassifierId>)>;

/// Default additive subset cost.
[[nodiscard]] double additive_cost(const ClassifierProfile& profile,
                                   std::span<const ClassifierId> cids);

/// 1 - prod over the subset of (1 - auth_prob(cid, context)).
/// The empty subset yields 0. Throws ConfigError when a classifier has no
/// probability entry for the context.
[[nodiscard]] double combined_prob(const ClassifierProfile& profile,
                                   std::span<const ClassifierId> subset,
                                   const ContextLabel& context);

/// Chooses which classifiers to activate now.
///
/// Classifiers whose time + dt_delay meets or exceeds dt_crit are
/// time-critical and forced into every candidate: waiting one more loop
/// iteration would deliver their score after the projected lock instant.
///
/// Among subsets S_sub of all_cids with combined_prob(S_sub) strictly above
/// th_p, returns the candidate S_sub ∪ critical of minimum cost (ties:
/// lexicographically smallest sorted id list). Time-critical members add
/// cost but do not count toward the probability test. When no subset
/// passes the threshold, returns all_cids unchanged (fail-safe).
///
/// Enumeration is exponential; all_cids is capped at 16 classifiers.
[[nodiscard]] std::vector<ClassifierId> schedule(
    const ClassifierProfile& profile, std::span<const ClassifierId> all_cids,
    const ContextLabel& context, Duration dt_crit,
    const SchedulerParams& params, const SetCostFn& cost_fn = {});

}  // namespace tdf
