#include "tdf/fusion.hpp"

#include <algorithm>
#include <cmath>

namespace tdf {

NormParams zscore_fit(std::span<const double> scores) {
  if (scores.size() < 2) {
    throw ValidationError("z-score fit needs at least 2 scores");
  }
  double sum = 0.0;
  for (double s : scores) {
    sum += s;
  }
  const double mu = sum / static_cast<double>(scores.size());
  double ss = 0.0;
  for (double s : scores) {
    const double d = s - mu;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(scores.size());
  if (var <= 0.0) {
    throw ValidationError("z-score fit needs non-constant scores");
  }
  return {mu, std::sqrt(var)};
}

double zscore_apply(const NormTable& norms, const ClassifierId& cid,
                    double raw) {
  auto it = norms.find(cid);
  if (it == norms.end()) {
    throw ConfigError("no normalization parameters for classifier '" + cid +
                      "'");
  }
  return zscore(raw, it->second);
}

FusedScore sample_fusion(std::span<const double> scores) {
  if (scores.empty()) {
    return std::nullopt;
  }
  double sum = 0.0;
  for (double s : scores) {
    sum += s;
  }
  return sum / static_cast<double>(scores.size());
}

FusedScore classifier_fusion(std::span<const FusedScore> per_classifier) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& b : per_classifier) {
    if (b.has_value()) {
      sum += *b;
      ++n;
    }
  }
  if (n == 0) {
    return std::nullopt;
  }
  return sum / static_cast<double>(n);
}

Duration auth_window(const WindowPolicy& policy, const ContextLabel& context) {
  auto it = policy.find(context);
  if (it == policy.end()) {
    throw ConfigError("no authentication window for context '" + context +
                      "'");
  }
  return it->second;
}

FusedScore fuse_after(std::span<const ClassifierId> cids,
                      const History& history, TimeInstant t_bound,
                      const NormTable& norms) {
  // Iterate classifiers in sorted-id order regardless of the caller's
  // ordering, so the floating-point average is reproducible.
  std::vector<ClassifierId> order(cids.begin(), cids.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  std::vector<FusedScore> per_classifier;
  per_classifier.reserve(order.size());
  std::vector<double> normalized;
  for (const auto& cid : order) {
    const auto window = history.since(cid, t_bound);
    normalized.clear();
    normalized.reserve(window.size());
    for (const auto& rec : window) {
      normalized.push_back(zscore_apply(norms, cid, rec.alpha));
    }
    per_classifier.push_back(sample_fusion(normalized));
  }
  return classifier_fusion(per_classifier);
}

FusedScore fuse(std::span<const ClassifierId> cids, const History& history,
                const ContextLabel& context, TimeInstant t_now,
                const WindowPolicy& policy, const NormTable& norms) {
  return fuse_after(cids, history, t_now - auth_window(policy, context),
                    norms);
}

Duration critical_time(std::span<const ClassifierId> cids,
                       const History& history, const ContextLabel& context,
                       TimeInstant t_now, const WindowPolicy& policy,
                       const NormTable& norms, double th_beta) {
  const TimeInstant t_start = t_now - auth_window(policy, context);
  if (below_threshold(fuse_after(cids, history, t_start, norms), th_beta)) {
    return 0;
  }

  // Candidate offsets: one per record-expiry instant. A record at t_i is in
  // the window while t_i > t_start + dt, so it expires exactly at
  // dt = t_i - t_start (the strict bound excludes it there). Between
  // expiries the fused value is constant, and once every record has
  // expired fusion is absent, which counts as below any threshold -- so
  // the scan always terminates at or before the largest offset.
  std::vector<Duration> offsets;
  for (const auto& [cid, timeline] : history.records()) {
    if (std::find(cids.begin(), cids.end(), cid) == cids.end()) {
      continue;
    }
    for (const auto& rec : timeline) {
      if (rec.t > t_start) {
        offsets.push_back(rec.t - t_start);
      }
    }
  }
  std::sort(offsets.begin(), offsets.end());
  offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());

  for (Duration dt : offsets) {
    if (below_threshold(fuse_after(cids, history, t_start + dt, norms),
                        th_beta)) {
      return dt;
    }
  }
  // Unreachable when offsets is non-empty (the last offset empties the
  // window); reachable only if the window was already empty, which the
  // below-threshold check at dt = 0 caught above.
  return 0;
}

}  // namespace tdf
