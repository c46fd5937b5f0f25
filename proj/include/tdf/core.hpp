#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdf {

// Simulated time in integer milliseconds. Integer timestamps keep window
// boundaries, critical-time search and trace replay exact -- there is no
// "almost expired" record.
using TimeInstant = std::int64_t;
using Duration = std::int64_t;

using ClassifierId = std::string;
using ContextLabel = std::string;

/// Raised when a config file cannot be parsed or fails validation.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when runtime inputs violate a documented precondition
/// (non-finite scores, malformed traces, impossible parameters).
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One authentication score produced by one classifier at one instant.
struct ScoreRecord {
  ClassifierId cid;
  double alpha = 0.0;
  TimeInstant t = 0;
};

/// Per-classifier score timelines, each kept sorted by timestamp.
///
/// Window queries are strict: since(cid, t0) returns exactly the records
/// with t > t0. Records may share timestamps (both count as in-window
/// samples); timelines are ordered by (t, alpha, cid), a total order, so
/// the structure is identical for any insertion order of the same records.
class History {
public:
  /// Inserts a record at its timestamp position. Throws ValidationError
  /// if alpha is not a finite number.
  void insert(ScoreRecord record);

  /// All records of `cid` with t strictly greater than `t0`, oldest first.
  /// Unknown classifiers yield an empty span.
  [[nodiscard]] std::span<const ScoreRecord> since(const ClassifierId& cid,
                                                   TimeInstant t0) const;

  /// Drops every record with t <= cutoff. Safe whenever all future window
  /// queries use bounds >= cutoff (strict queries never see such records).
  void prune(TimeInstant cutoff);

  [[nodiscard]] const std::map<ClassifierId, std::vector<ScoreRecord>>&
  records() const {
    return records_;
  }

  [[nodiscard]] std::size_t total_records() const;

  [[nodiscard]] bool empty() const { return records_.empty(); }

  void clear() { records_.clear(); }

private:
  // std::map keeps classifier iteration order deterministic, which pins the
  // floating-point summation order in fusion and makes runs reproducible.
  std::map<ClassifierId, std::vector<ScoreRecord>> records_;
};

}  // namespace tdf
