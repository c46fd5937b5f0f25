#include "tdf/scheduler.hpp"

#include <algorithm>

namespace tdf {

namespace {

const ClassifierTraits& traits_of(const ClassifierProfile& profile,
                                  const ClassifierId& cid) {
  auto it = profile.classifiers.find(cid);
  if (it == profile.classifiers.end()) {
    throw ConfigError("classifier '" + cid + "' missing from profile");
  }
  return it->second;
}

double prob_of(const ClassifierProfile& profile, const ClassifierId& cid,
               const ContextLabel& context) {
  const auto& traits = traits_of(profile, cid);
  auto it = traits.auth_prob.find(context);
  if (it == traits.auth_prob.end()) {
    throw ConfigError("classifier '" + cid +
                      "' has no auth probability for context '" + context +
                      "'");
  }
  return it->second;
}

}  // namespace

double additive_cost(const ClassifierProfile& profile,
                     std::span<const ClassifierId> cids) {
  double total = 0.0;
  for (const auto& cid : cids) {
    total += traits_of(profile, cid).cost;
  }
  return total;
}

double combined_prob(const ClassifierProfile& profile,
                     std::span<const ClassifierId> subset,
                     const ContextLabel& context) {
  double miss_all = 1.0;
  for (const auto& cid : subset) {
    miss_all *= 1.0 - prob_of(profile, cid, context);
  }
  return 1.0 - miss_all;
}

std::vector<ClassifierId> schedule(const ClassifierProfile& profile,
                                   std::span<const ClassifierId> all_cids,
                                   const ContextLabel& context,
                                   Duration dt_crit,
                                   const SchedulerParams& params,
                                   const SetCostFn& cost_fn) {
  if (all_cids.empty()) {
    throw ValidationError("schedule requires a non-empty classifier set");
  }
  if (all_cids.size() > 16) {
    throw ValidationError(
        "schedule enumerates subsets exhaustively; at most 16 classifiers "
        "are supported");
  }
  if (dt_crit < 0) {
    throw ValidationError("dt_crit must be non-negative");
  }
  if (!(params.th_p >= 0.0 && params.th_p <= 1.0)) {
    throw ValidationError("th_p must lie in [0, 1]");
  }
  if (params.dt_delay <= 0) {
    throw ValidationError("dt_delay must be positive");
  }

  std::vector<ClassifierId> ids(all_cids.begin(), all_cids.end());
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw ValidationError("schedule requires distinct classifier ids");
  }

  const std::size_t n = ids.size();
  std::vector<double> prob(n);
  std::uint32_t crit_mask = 0;
  for (std::size_t i = 0; i < n; ++i) {
    prob[i] = prob_of(profile, ids[i], context);
    // A classifier is time-critical when even an immediate activation,
    // delayed by one loop period, would land at or past the lock horizon.
    if (traits_of(profile, ids[i]).time + params.dt_delay >= dt_crit) {
      crit_mask |= 1u << i;
    }
  }

  const auto set_cost = [&](std::span<const ClassifierId> cids) {
    return cost_fn ? cost_fn(profile, cids) : additive_cost(profile, cids);
  };
  const auto ids_of_mask = [&](std::uint32_t mask) {
    std::vector<ClassifierId> out;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        out.push_back(ids[i]);
      }
    }
    return out;  // ascending bit order over sorted ids => sorted
  };

  bool found = false;
  double best_cost = 0.0;
  std::vector<ClassifierId> best;

  // The empty subset has combined probability 0 and can never exceed
  // th_p >= 0, so masks start at 1. Time-critical classifiers join the
  // candidate afterwards: they contribute cost but not probability.
  const std::uint32_t full = (n == 32) ? ~0u : (1u << n) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    double miss_all = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        miss_all *= 1.0 - prob[i];
      }
    }
    const double p_cand = 1.0 - miss_all;
    if (!(p_cand > params.th_p)) {
      continue;
    }
    auto candidate = ids_of_mask(mask | crit_mask);
    const double cost = set_cost(candidate);
    if (!found || cost < best_cost ||
        (cost == best_cost && candidate < best)) {
      found = true;
      best_cost = cost;
      best = std::move(candidate);
    }
  }

  if (!found) {
    return ids;  // fail-safe: no subset is probable enough, run everything
  }
  return best;
}

}  // namespace tdf
