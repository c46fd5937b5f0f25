#include "tdf/authloop.hpp"

#include <algorithm>

namespace tdf {

const char* device_state_name(DeviceState s) {
  return s == DeviceState::locked ? "locked" : "unlocked";
}

const ScenarioSegment& Scenario::segment_at(TimeInstant t) const {
  auto it = std::upper_bound(
      segments.begin(), segments.end(), t,
      [](TimeInstant v, const ScenarioSegment& s) { return v < s.start; });
  if (it == segments.begin()) {
    throw ValidationError("no scenario segment covers t=" + std::to_string(t));
  }
  return *std::prev(it);
}

namespace {

void validate_scenario(const Scenario& scenario) {
  if (scenario.duration <= 0) {
    throw ValidationError("scenario duration must be positive");
  }
  if (scenario.segments.empty()) {
    throw ValidationError("scenario needs at least one segment");
  }
  if (scenario.segments.front().start != 0) {
    throw ValidationError("the first scenario segment must start at t=0");
  }
  for (std::size_t i = 1; i < scenario.segments.size(); ++i) {
    if (scenario.segments[i].start <= scenario.segments[i - 1].start) {
      throw ValidationError("scenario segments must have strictly increasing "
                            "start times");
    }
  }
  if (scenario.segments.back().start >= scenario.duration) {
    throw ValidationError("scenario segments must start before the scenario "
                          "ends");
  }
}

}  // namespace

AuthLoop::AuthLoop(PolicyConfig policy, ClassifierProfile profile)
    : policy_(std::move(policy)), profile_(std::move(profile)) {
  if (profile_.classifiers.empty()) {
    throw ValidationError("the loop needs at least one classifier");
  }
  if (policy_.dt_delay <= 0) {
    throw ValidationError("dt_delay must be positive");
  }
  if (!(policy_.th_p >= 0.0 && policy_.th_p <= 1.0)) {
    throw ValidationError("th_p must lie in [0, 1]");
  }
  if (policy_.windows.empty()) {
    throw ValidationError("the loop needs an authentication window per "
                          "context");
  }
  for (const auto& [context, window] : policy_.windows) {
    if (window <= 0) {
      throw ValidationError("authentication window for context '" + context +
                            "' must be positive");
    }
    max_window_ = std::max(max_window_, window);
  }
  for (const auto& [cid, traits] : profile_.classifiers) {
    if (traits.time <= 0) {
      throw ValidationError("classifier '" + cid +
                            "' needs a positive capture time");
    }
    all_cids_.push_back(cid);
  }
}

std::vector<PendingActivation> AuthLoop::take_due(TimeInstant t_now) {
  std::vector<PendingActivation> due;
  auto it = pending_.begin();
  while (it != pending_.end()) {
    if (it->completes_at <= t_now) {
      due.push_back(*it);
      it = pending_.erase(it);
    } else {
      ++it;
    }
  }
  std::sort(due.begin(), due.end(),
            [](const PendingActivation& a, const PendingActivation& b) {
              if (a.completes_at != b.completes_at) {
                return a.completes_at < b.completes_at;
              }
              return a.cid < b.cid;
            });
  return due;
}

AuthLoop::StepResult AuthLoop::step(std::span<const ScoreRecord> arrivals,
                                    const ContextLabel& context,
                                    TimeInstant t_now) {
  if (stepped_ && t_now <= last_step_t_) {
    throw ValidationError("loop steps must have strictly increasing t_now");
  }
  stepped_ = true;
  last_step_t_ = t_now;

  for (const auto& rec : arrivals) {
    if (!profile_.classifiers.contains(rec.cid)) {
      throw ConfigError("arrived score references unknown classifier '" +
                        rec.cid + "'");
    }
    history_.insert(rec);
    ++score_calcs_;
  }

  StepResult result;
  result.beta =
      fuse(all_cids_, history_, context, t_now, policy_.windows, policy_.norms);
  result.state = below_threshold(result.beta, policy_.th_beta)
                     ? DeviceState::locked
                     : DeviceState::unlocked;
  result.dt_crit = critical_time(all_cids_, history_, context, t_now,
                                 policy_.windows, policy_.norms,
                                 policy_.th_beta);

  const auto scheduled =
      schedule(profile_, all_cids_, context, result.dt_crit,
               {policy_.th_p, policy_.dt_delay});
  for (const auto& cid : scheduled) {
    const bool in_flight =
        std::any_of(pending_.begin(), pending_.end(),
                    [&](const PendingActivation& p) { return p.cid == cid; });
    if (in_flight) {
      continue;  // one capture per classifier at a time
    }
    const Duration capture = profile_.classifiers.at(cid).time;
    pending_.push_back({cid, t_now, t_now + capture});
    result.activated.push_back(cid);
  }

  // Records this old can never be seen again: every future window bound is
  // at least t_now - max_window_, and window queries are strict.
  history_.prune(t_now - max_window_ - policy_.dt_delay);
  return result;
}

namespace {

LoopRun drive(const Scenario& scenario, const PolicyConfig& policy,
              const ClassifierProfile& profile, const ScoreSource* source,
              std::span<const ScoreRecord> replayed) {
  validate_scenario(scenario);
  for (const auto& seg : scenario.segments) {
    if (!policy.windows.contains(seg.context)) {
      throw ConfigError("scenario references undeclared context '" +
                        seg.context + "'");
    }
  }
  for (std::size_t i = 1; i < replayed.size(); ++i) {
    if (replayed[i].t < replayed[i - 1].t) {
      throw ValidationError(
          "replayed records must be ordered by non-decreasing t");
    }
  }

  AuthLoop loop(policy, profile);
  LoopRun run;
  std::size_t next_replayed = 0;

  for (TimeInstant t = 0; t < scenario.duration; t += policy.dt_delay) {
    std::vector<ScoreRecord> arrivals;
    if (source != nullptr) {
      for (const auto& pa : loop.take_due(t)) {
        const ScenarioSegment& seg = scenario.segment_at(pa.start);
        arrivals.push_back(
            {pa.cid, (*source)(pa.cid, seg.context, seg.genuine, pa.start),
             pa.completes_at});
      }
    } else {
      // Replay: pending activations are tracked for scheduling fidelity but
      // the scores come from the recorded trace.
      (void)loop.take_due(t);
      while (next_replayed < replayed.size() && replayed[next_replayed].t <= t) {
        arrivals.push_back(replayed[next_replayed]);
        ++next_replayed;
      }
    }

    const ContextLabel& context = scenario.segment_at(t).context;
    auto res = loop.step(arrivals, context, t);

    TraceRow row;
    row.t = t;
    row.context = context;
    row.beta = res.beta;
    row.state = res.state;
    row.activated = std::move(res.activated);
    for (const auto& rec : arrivals) {
      row.completed.push_back(rec.cid);
    }
    row.score_calcs = loop.score_calcs();
    run.trace.push_back(std::move(row));
    run.scores.insert(run.scores.end(), arrivals.begin(), arrivals.end());
  }
  return run;
}

}  // namespace

LoopRun run_scenario(const Scenario& scenario, const PolicyConfig& policy,
                     const ClassifierProfile& profile,
                     const ScoreSource& source) {
  if (!source) {
    throw ValidationError("run_scenario needs a score source");
  }
  return drive(scenario, policy, profile, &source, {});
}

LoopRun replay_scenario(const Scenario& scenario, const PolicyConfig& policy,
                        const ClassifierProfile& profile,
                        std::span<const ScoreRecord> arrivals) {
  return drive(scenario, policy, profile, nullptr, arrivals);
}

}  // namespace tdf
