#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tdf/core.hpp"
#include "tdf/fusion.hpp"
#include "tdf/scheduler.hpp"

namespace tdf {

enum class DeviceState { locked, unlocked };

[[nodiscard]] const char* device_state_name(DeviceState s);

/// Loop-wide policy: thresholds, loop period, per-context windows, and the
/// normalization used when fusing.
struct PolicyConfig {
  double th_p = 0.9;
  double th_beta = 0.0;      // lock threshold on the fused (normalized) score
  Duration dt_delay = 1000;  // loop period, ms
  WindowPolicy windows;
  NormTable norms;
};

/// One in-flight classifier capture.
struct PendingActivation {
  ClassifierId cid;
  TimeInstant start = 0;
  TimeInstant completes_at = 0;  // start + Time(cid)
};

/// One stretch of the simulated environment: which context the device is in
/// and whether the person using it is the genuine owner.
struct ScenarioSegment {
  TimeInstant start = 0;
  ContextLabel context;
  bool genuine = true;
};

struct Scenario {
  Duration duration = 0;
  std::vector<ScenarioSegment> segments;  // first at 0, strictly increasing
  std::uint64_t seed = 0;

  /// Segment covering instant t (the last one starting at or before t).
  [[nodiscard]] const ScenarioSegment& segment_at(TimeInstant t) const;
};

/// One loop tick as recorded in the trace.
struct TraceRow {
  TimeInstant t = 0;
  ContextLabel context;
  FusedScore beta;
  DeviceState state = DeviceState::locked;
  std::vector<ClassifierId> activated;  // captures started this tick
  std::vector<ClassifierId> completed;  // scores delivered this tick
  std::uint64_t score_calcs = 0;        // cumulative completed activations
};

using Trace = std::vector<TraceRow>;

/// The per-tick core of the loop, usable directly for custom drivers.
/// Owns the history and the pending-activation set.
class AuthLoop {
 public:
  AuthLoop(PolicyConfig policy, ClassifierProfile profile);

  struct StepResult {
    DeviceState state = DeviceState::locked;
    FusedScore beta;
    Duration dt_crit = 0;
    std::vector<ClassifierId> activated;
  };

  /// Removes and returns the pending activations that complete at or
  /// before t_now, ordered by (completion time, cid).
  [[nodiscard]] std::vector<PendingActivation> take_due(TimeInstant t_now);

  /// One loop iteration at t_now (strictly later than the previous step):
  /// records the arrived scores, fuses the window, decides the device
  /// state (locked iff the fused score is absent or below th_beta),
  /// projects the critical time, and schedules/starts activations.
  StepResult step(std::span<const ScoreRecord> arrivals,
                  const ContextLabel& context, TimeInstant t_now);

  [[nodiscard]] const History& history() const { return history_; }
  [[nodiscard]] std::span<const PendingActivation> pending() const {
    return pending_;
  }
  [[nodiscard]] std::uint64_t score_calcs() const { return score_calcs_; }

 private:
  PolicyConfig policy_;
  ClassifierProfile profile_;
  std::vector<ClassifierId> all_cids_;
  Duration max_window_ = 0;
  History history_;
  std::vector<PendingActivation> pending_;
  std::uint64_t score_calcs_ = 0;
  TimeInstant last_step_t_ = -1;
  bool stepped_ = false;
};

/// Produces the score a completing capture delivers. Called with the
/// classifier, the context and subject present when the capture started,
/// and the capture's start instant (unique per (cid, start)).
using ScoreSource = std::function<double(
    const ClassifierId& cid, const ContextLabel& context, bool genuine,
    TimeInstant start)>;

///// A finished simulation: the per-tick trace plus every score that was
/// delivered, in delivery order (re-playable through replay_scenario).
struct LoopRun {
  Trace trace;
  std::vector<ScoreRecord> scores;
};

/// Drives AuthLoop over the scenario, one step every dt_delay from t = 0
/// while t < duration. Activations complete Time(cid) ms after they start
/// and deliver a score drawn from `source`.
[[nodiscard]] LoopRun run_scenario(const Scenario& scenario,
                                   const PolicyConfig& policy,
                                   const ClassifierProfile& profile,
                                   const ScoreSource& source);

/// Same stepping, but scores arrive from a recorded trace instead of the
/// source: each record is delivered at the first tick at or after its
/// timestamp. Activations are still scheduled and tracked, but produce no
/// scores of their own.
[[nodiscard]] LoopRun replay_scenario(const Scenario& scenario,
                                      const PolicyConfig& policy,
                                      const ClassifierProfile& profile,
                                      std::span<const ScoreRecord> arrivals);

}  // namespace tdf
