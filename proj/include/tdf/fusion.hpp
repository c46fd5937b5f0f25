#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "tdf/core.hpp"

namespace tdf {

/// Z-score normalization parameters for one classifier, fitted on its
/// training scores.
struct NormParams {
  double mu = 0.0;
  double sigma = 1.0;  // population standard deviation, > 0
};

using NormTable = std::map<ClassifierId, NormParams>;

/// A fused score is either a finite value or absent: fusing an empty score
/// set yields no opinion rather than a neutral value. Absent compares below
/// every threshold (fail-closed), so a device with no recent scores locks.
using FusedScore = std::optional<double>;

/// Authentication window length per context, ms.
using WindowPolicy = std::map<ContextLabel, Duration>;

/// Fits mu = mean, sigma = population standard deviation.
/// Throws ValidationError on fewer than 2 scores or zero variance.
[[nodiscard]] NormParams zscore_fit(std::span<const double> scores);

[[nodiscard]] inline double zscore(double raw, const NormParams& p) {
  return (raw - p.mu) / p.sigma;
}

/// (raw - mu) / sigma using cid's fitted parameters.
/// Throws ConfigError when cid has no entry.
[[nodiscard]] double zscore_apply(const NormTable& norms,
                                  const ClassifierId& cid, double raw);

/// Arithmetic mean, or absent on empty input.
[[nodiscard]] FusedScore sample_fusion(std::span<const double> scores);

/// Mean of the present entries, or absent when every entry is absent.
[[nodiscard]] FusedScore classifier_fusion(
    std::span<const FusedScore> per_classifier);

/// Window lookup; throws ConfigError for an undeclared context.
[[nodiscard]] Duration auth_window(const WindowPolicy& policy,
                                   const ContextLabel& context);

/// Two-dimensional fusion over the records with t > t_bound:
/// per classifier, normalize and average its in-window scores (absent when
/// it has none); then average the per-classifier results, skipping absent
/// ones. Classifiers are visited in cid order, fixing the summation order.
[[nodiscard]] FusedScore fuse_after(std::span<const ClassifierId> cids,
                                    const History& history, TimeInstant t_bound,
                                    const NormTable& norms);

/// fuse_after with the bound t_now - auth_window(policy, context).
[[nodiscard]] FusedScore fuse(std::span<const ClassifierId> cids,
                              const History& history,
                              const ContextLabel& context, TimeInstant t_now,
                              const WindowPolicy& policy,
                              const NormTable& norms);

/// How long the authentication window can slide forward before the fused
/// score drops below th_beta (absent counting as below), assuming no new
/// scores arrive. Returns 0 when the current score is already below.
///
/// The fused value only changes when a record leaves the window, so the
/// search evaluates fuse_after at each record-expiry offset instead of
/// scanning millisecond by millisecond; the two agree exactly because time
/// is integral and the window bound is strict.
[[nodiscard]] Duration critical_time(std::span<const ClassifierId> cids,
                                     const History& history,
                                     const ContextLabel& context,
                                     TimeInstant t_now,
                                     const WindowPolicy& policy,
                                     const NormTable& norms, double th_beta);

/// The lock rule shared by the loop and the evaluators: a device stays
/// unlocked only for a present score at or above the threshold.
[[nodiscard]] inline bool below_threshold(const FusedScore& beta,
                                          double th_beta) {
  return !beta.has_value() || *beta < th_beta;
}

}  // namespace tdf
