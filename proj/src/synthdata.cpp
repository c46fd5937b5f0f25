#include "tdf/synthdata.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "tdf/stats.hpp"

namespace tdf {

const GaussianPair& ScoreModel::at(const ClassifierId& cid,
                                   const ContextLabel& context) const {
  auto ctx = cells.find(context);
  if (ctx != cells.end()) {
    auto cell = ctx->second.find(cid);
    if (cell != ctx->second.end()) {
      return cell->second;
    }
  }
  throw ConfigError("no score model for classifier '" + cid +
                    "' in context '" + context + "'");
}

double calibrate(double target_eer) {
  if (!(target_eer > 0.0 && target_eer < 0.5)) {
    throw ValidationError("calibration target EER must lie in (0, 0.5)");
  }
  return -2.0 * stats::normal_quantile(target_eer);
}

double model_eer(double genuine_mu) {
  return stats::normal_cdf(-genuine_mu / 2.0);
}

double uniform_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

double normal_draw(std::mt19937_64& rng) {
  return stats::normal_quantile(uniform_open(rng));
}

double draw_score(const ScoreModel& model, const ClassifierId& cid,
                  const ContextLabel& context, SubjectLabel label,
                  std::mt19937_64& rng) {
  const GaussianPair& pair = model.at(cid, context);
  const double mu = label == SubjectLabel::genuine ? pair.genuine_mu : 0.0;
  return mu + normal_draw(rng);
}

std::uint64_t hash_tag(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t root,
                       std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = splitmix64(root);
  for (std::uint64_t p : parts) {
    h = splitmix64(h ^ p);
  }
  return h;
}

std::mt19937_64 seeded_engine(std::uint64_t root,
                              std::initializer_list<std::uint64_t> parts) {
  return std::mt19937_64(mix_seed(root, parts));
}

double cell_draw(const ScoreModel& model, std::uint64_t seed,
                 const ContextLabel& context, const ClassifierId& cid,
                 std::uint64_t trial, SubjectLabel label,
                 std::uint64_t instant) {
  auto rng = seeded_engine(
      seed, {hash_tag("trial-draw"), hash_tag(context), hash_tag(cid), trial,
             label == SubjectLabel::genuine ? 1ull : 0ull, instant});
  return draw_score(model, cid, context, label, rng);
}

ApproachSpec ApproachSpec::parse(std::string_view name) {
  if (name == "max") {
    return {Kind::max_rule, 1};
  }
  if (name == "sum") {
    return {Kind::sum_rule, 1};
  }
  if (name == "cwma") {
    return {Kind::cwma, 1};
  }
  if (name.size() == 6 && name.starts_with("our_") && name.ends_with("x") &&
      name[4] >= '1' && name[4] <= '9') {
    return {Kind::ours, name[4] - '0'};
  }
  throw ConfigError("unknown approach '" + std::string(name) +
                    "' (expected max, sum, cwma, or our_<k>x with k in 1..9)");
}

std::string ApproachSpec::name() const {
  switch (kind) {
    case Kind::max_rule:
      return "max";
    case Kind::sum_rule:
      return "sum";
    case Kind::cwma:
      return "cwma";
    case Kind::ours:
      return "our_" + std::to_string(k) + "x";
  }
  return "unknown";
}

namespace {

// Trials model the loop's steady state: the fused score is healthy, the
// projected lock instant is far in the future, and no classifier is
// time-critical. Any bound far above every Time(cid) + dt_delay works.
constexpr Duration steady_state_dt_crit =
    std::numeric_limits<Duration>::max() / 4;

double baseline_trial(const ApproachSpec& approach, const ScoreModel& model,
                      const TrialConfig& config,
                      std::span<const ClassifierId> cids,
                      const NormTable& norms, const ContextLabel& context,
                      std::uint64_t seed, std::uint64_t trial,
                      SubjectLabel label) {
  std::map<ClassifierId, double> by_cid;
  std::vector<double> normalized;
  normalized.reserve(cids.size());
  for (const auto& cid : cids) {
    const double raw = cell_draw(model, seed, context, cid, trial, label, 0);
    const double z = zscore_apply(norms, cid, raw);
    normalized.push_back(z);
    by_cid.emplace(cid, z);
  }
  switch (approach.kind) {
    case ApproachSpec::Kind::max_rule:
      return fuse_max(normalized);
    case ApproachSpec::Kind::sum_rule:
      return fuse_sum(normalized);
    case ApproachSpec::Kind::cwma:
      return cwma_fuse(config.cwma, context, by_cid);
    default:
      throw ValidationError("baseline_trial called for the scheduled approach");
  }
}

double scheduled_trial(const ScoreModel& model, const TrialConfig& config,
                       std::span<const ClassifierId> cids,
                       const NormTable& norms, const ContextLabel& context,
                       std::span<const ClassifierId> selected, int k,
                       std::uint64_t seed, std::uint64_t trial,
                       SubjectLabel label) {
  History h;
  for (int j = 0; j < k; ++j) {
    const auto t = static_cast<TimeInstant>(j) * config.dt_delay;
    for (const auto& cid : selected) {
      h.insert({cid,
                cell_draw(model, seed, context, cid, trial, label,
                          static_cast<std::uint64_t>(j)),
                t});
    }
  }
  const auto t_now = static_cast<TimeInstant>(k - 1) * config.dt_delay;
  const FusedScore beta =
      fuse(cids, h, context, t_now, config.windows, norms);
  if (!beta.has_value()) {
    throw ValidationError(
        "scheduled trial fused to an empty window; the context's window is "
        "too short for the sampling spacing");
  }
  return *beta;
}

}  // namespace

TrialSet build_trials(const ScoreModel& model, const ApproachSpec& approach,
                      std::span<const ContextLabel> contexts,
                      std::size_t n_trials, const TrialConfig& config,
                      std::uint64_t seed) {
  if (n_trials == 0) {
    throw ValidationError("build_trials needs n_trials > 0");
  }
  std::vector<ClassifierId> cids;
  cids.reserve(config.profile.classifiers.size());
  for (const auto& [cid, traits] : config.profile.classifiers) {
    cids.push_back(cid);
  }
  if (cids.empty()) {
    throw ValidationError("build_trials needs at least one classifier");
  }

  TrialSet out;
  for (const auto& context : contexts) {
    const NormTable& norms = [&]() -> const NormTable& {
      auto it = config.norms.find(context);
      if (it == config.norms.end()) {
        throw ConfigError("no normalization table for context '" + context +
                          "'");
      }
      return it->second;
    }();

    ContextTrials cell;
    cell.genuine.reserve(n_trials);
    cell.impostor.reserve(n_trials);

    std::vector<ClassifierId> selected;
    if (approach.kind == ApproachSpec::Kind::ours) {
      // The context is fixed within a trial, so the steady-state schedule
      // is the same at every instant; compute it once.
      selected = schedule(config.profile, cids, context, steady_state_dt_crit,
                          {config.th_p, config.dt_delay});
      const auto window = auth_window(config.windows, context);
      if (static_cast<TimeInstant>(approach.k - 1) * config.dt_delay >=
          window) {
        throw ValidationError(
            "context '" + context + "': window " + std::to_string(window) +
            "ms cannot hold " + std::to_string(approach.k) +
            " samples spaced " + std::to_string(config.dt_delay) + "ms apart");
      }
      cell.score_calcs_per_trial =
          static_cast<std::uint64_t>(approach.k) * selected.size();
    } else {
      cell.score_calcs_per_trial = cids.size();
    }

    for (std::uint64_t trial = 0; trial < n_trials; ++trial) {
      for (const SubjectLabel label :
           {SubjectLabel::genuine, SubjectLabel::impostor}) {
        double fused = 0.0;
        if (approach.kind == ApproachSpec::Kind::ours) {
          fused = scheduled_trial(model, config, cids, norms, context,
                                  selected, approach.k, seed, trial, label);
        } else {
          fused = baseline_trial(approach, model, config, cids, norms,
                                 context, seed, trial, label);
        }
        (label == SubjectLabel::genuine ? cell.genuine : cell.impostor)
            .push_back(fused);
      }
    }
    out.by_context.emplace(context, std::move(cell));
  }
  return out;
}

}  // namespace tdf
