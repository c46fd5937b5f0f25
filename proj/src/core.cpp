#include "tdf/core.hpp"

#include <algorithm>
#include <cmath>

namespace tdf {

namespace {

// Total order on records within one classifier's timeline. Ordering ties
// beyond the timestamp makes the final timeline a pure function of the
// record multiset, independent of insertion order.
bool record_less(const ScoreRecord& a, const ScoreRecord& b) {
  if (a.t != b.t) {
    return a.t < b.t;
  }
  if (a.alpha != b.alpha) {
    return a.alpha < b.alpha;
  }
  return a.cid < b.cid;
}

}  // namespace

void History::insert(ScoreRecord record) {
  if (!std::isfinite(record.alpha)) {
    throw ValidationError("score for classifier '" + record.cid +
                          "' is not finite");
  }
  auto& timeline = records_[record.cid];
  auto pos = std::upper_bound(timeline.begin(), timeline.end(), record,
                              record_less);
  timeline.insert(pos, std::move(record));
}

std::span<const ScoreRecord> History::since(const ClassifierId& cid,
                                            TimeInstant t0) const {
  auto it = records_.find(cid);
  if (it == records_.end()) {
    return {};
  }
  const auto& timeline = it->second;
  auto first = std::upper_bound(
      timeline.begin(), timeline.end(), t0,
      [](TimeInstant t, const ScoreRecord& r) { return t < r.t; });
  return {first, timeline.end()};
}

void History::prune(TimeInstant cutoff) {
  for (auto it = records_.begin(); it != records_.end();) {
    auto& timeline = it->second;
    auto first_kept = std::upper_bound(
        timeline.begin(), timeline.end(), cutoff,
        [](TimeInstant t, const ScoreRecord& r) { return t < r.t; });
    timeline.erase(timeline.begin(), first_kept);
    if (timeline.empty()) {
      it = records_.erase(it);
    } else {
      ++it;
    }
  }
}

std::size_t History::total_records() const {
  std::size_t n = 0;
  for (const auto& [cid, timeline] : records_) {
    n += timeline.size();
  }
  return n;
}

}  // namespace tdf
