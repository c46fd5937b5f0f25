#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tdf/authloop.hpp"
#include "tdf/core.hpp"
#include "tdf/fusion.hpp"

namespace tdf {

struct ClassifierConfig {
  Duration time_ms = 1000;  // capture latency
  double cost = 1.0;
};

struct ContextConfig {
  Duration window_ms = 4000;
  std::map<ClassifierId, double> eer_targets;  // per classifier, in (0, 0.5)
};

/// Everything an experiment run needs, parsed from one config file.
/// See README.md for the file grammar.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t trials = 2000;
  std::size_t training_samples = 400;  // per (classifier, context, label)
  double grid_step = 0.02;
  std::string out_dir = "out";
  std::vector<std::string> approaches;

  double th_p = 0.9;
  double th_beta = 0.0;
  Duration dt_delay = 1000;

  std::map<ClassifierId, ClassifierConfig> classifiers;
  std::map<ContextLabel, ContextConfig> contexts;

  /// Optional explicit normalization (otherwise fitted from training
  /// draws); primarily for replaying recorded traces.
  NormTable norms;

  std::optional<Scenario> scenario;

  /// FNV-1a hash of the raw config text, recorded in the run manifest.
  std::uint64_t source_hash = 0;
};

/// Parses the line-oriented config. Errors carry "<origin>:<line>:".
[[nodiscard]] ExperimentConfig parse_config(std::istream& in,
                                            const std::string& origin);

/// Opens the file (std::runtime_error when unreadable) and parses it.
[[nodiscard]] ExperimentConfig parse_config_file(const std::string& path);

/// Semantic validation of a parsed config; throws ConfigError naming the
/// offending field.
void validate_config(const ExperimentConfig& cfg);

}  // namespace tdf
