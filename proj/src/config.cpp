#include "tdf/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tdf/synthdata.hpp"

namespace tdf {

namespace {

std::string trim(std::string_view s) {
  const auto* ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

bool is_identifier(std::string_view s) {
  if (s.empty()) {
    return false;
  }
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '+' ||
                    c == '.' || c == '-';
    if (!ok) {
      return false;
    }
  }
  return true;
}

class Parser {
 public:
  Parser(std::istream& in, std::string origin)
      : in_(in), origin_(std::move(origin)) {}

  ExperimentConfig parse() {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_;
      hash_line(raw);
      std::string line = raw;
      if (auto hash = line.find('#'); hash != std::string::npos) {
        line.erase(hash);
      }
      line = trim(line);
      if (line.empty()) {
        continue;
      }
      if (line.front() == '[') {
        open_section(line);
      } else {
        key_value(line);
      }
    }
    finish();
    return std::move(cfg_);
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError(origin_ + ":" + std::to_string(line_) + ": " + message);
  }

  void hash_line(const std::string& raw) {
    for (unsigned char c : raw) {
      hash_ ^= c;
      hash_ *= 0x100000001b3ull;
    }
    hash_ ^= static_cast<unsigned char>('\n');
    hash_ *= 0x100000001b3ull;
  }

  double number(const std::string& value, const std::string& key) const {
    double out = 0.0;
    const char* b = value.data();
    const char* e = b + value.size();
    auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || p != e) {
      fail("invalid number '" + value + "' for key '" + key + "'");
    }
    return out;
  }

  std::int64_t integer(const std::string& value, const std::string& key) const {
    std::int64_t out = 0;
    const char* b = value.data();
    const char* e = b + value.size();
    auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || p != e) {
      fail("invalid integer '" + value + "' for key '" + key + "'");
    }
    return out;
  }

  std::uint64_t uinteger(const std::string& value, const std::string& key) const {
    std::uint64_t out = 0;
    const char* b = value.data();
    const char* e = b + value.size();
    auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || p != e) {
      fail("invalid unsigned integer '" + value + "' for key '" + key + "'");
    }
    return out;
  }

  void open_section(const std::string& line) {
    if (line.back() != ']') {
      fail("unterminated section header");
    }
    std::istringstream body(line.substr(1, line.size() - 2));
    std::string kind, arg, extra;
    body >> kind >> arg >> extra;
    if (!extra.empty()) {
      fail("section header has too many fields");
    }

    if (kind == "policy" || kind == "scenario" || kind == "segment") {
      if (!arg.empty()) {
        fail("section [" + kind + "] takes no argument");
      }
    } else if (kind == "classifier" || kind == "context" || kind == "norm") {
      if (!is_identifier(arg)) {
        fail("section [" + kind + "] needs an identifier argument "
             "(letters, digits, '_', '+', '.', '-')");
      }
    } else {
      fail("unknown section [" + kind + "]");
    }

    section_ = kind;
    section_arg_ = arg;
    seen_keys_.clear();

    if (kind == "policy") {
      if (policy_seen_) {
        fail("duplicate [policy] section");
      }
      policy_seen_ = true;
    } else if (kind == "classifier") {
      if (!cfg_.classifiers.emplace(arg, ClassifierConfig{}).second) {
        fail("duplicate classifier '" + arg + "'");
      }
    } else if (kind == "context") {
      if (!cfg_.contexts.emplace(arg, ContextConfig{}).second) {
        fail("duplicate context '" + arg + "'");
      }
    } else if (kind == "norm") {
      if (!cfg_.norms.emplace(arg, NormParams{}).second) {
        fail("duplicate norm section for classifier '" + arg + "'");
      }
    } else if (kind == "scenario") {
      if (cfg_.scenario.has_value()) {
        fail("duplicate [scenario] section");
      }
      cfg_.scenario.emplace();
    } else if (kind == "segment") {
      if (!cfg_.scenario.has_value()) {
        fail("[segment] must follow a [scenario] section");
      }
      cfg_.scenario->segments.emplace_back();
    }
  }

  void key_value(const std::string& line) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail("expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      fail("missing key before '='");
    }
    if (value.empty()) {
      fail("missing value for key '" + key + "'");
    }
    if (!seen_keys_.insert(key).second) {
      fail("duplicate key '" + key + "'");
    }

    if (section_.empty()) {
      top_level(key, value);
    } else if (section_ == "policy") {
      policy_key(key, value);
    } else if (section_ == "classifier") {
      classifier_key(key, value);
    } else if (section_ == "context") {
      context_key(key, value);
    } else if (section_ == "norm") {
      norm_key(key, value);
    } else if (section_ == "scenario") {
      scenario_key(key, value);
    } else if (section_ == "segment") {
      segment_key(key, value);
    }
  }

  void top_level(const std::string& key, const std::string& value) {
    if (key == "seed") {
      cfg_.seed = uinteger(value, key);
    } else if (key == "trials") {
      cfg_.trials = static_cast<std::size_t>(uinteger(value, key));
    } else if (key == "training_samples") {
      cfg_.training_samples = static_cast<std::size_t>(uinteger(value, key));
    } else if (key == "grid_step") {
      cfg_.grid_step = number(value, key);
    } else if (key == "out_dir") {
      cfg_.out_dir = value;
    } else if (key == "approaches") {
      std::istringstream list(value);
      std::string item;
      while (std::getline(list, item, ',')) {
        item = trim(item);
        if (item.empty()) {
          fail("empty entry in approaches list");
        }
        try {
          (void)ApproachSpec::parse(item);
        } catch (const ConfigError& e) {
          fail(e.what());
        }
        cfg_.approaches.push_back(item);
      }
      if (cfg_.approaches.empty()) {
        fail("approaches list is empty");
      }
    } else {
      fail("unknown top-level key '" + key + "'");
    }
  }

  void policy_key(const std::string& key, const std::string& value) {
    if (key == "th_p") {
      cfg_.th_p = number(value, key);
    } else if (key == "th_beta") {
      cfg_.th_beta = number(value, key);
    } else if (key == "delay_ms") {
      cfg_.dt_delay = integer(value, key);
    } else {
      fail("unknown [policy] key '" + key + "'");
    }
  }

  void classifier_key(const std::string& key, const std::string& value) {
    auto& c = cfg_.classifiers.at(section_arg_);
    if (key == "time_ms") {
      c.time_ms = integer(value, key);
    } else if (key == "cost") {
      c.cost = number(value, key);
    } else {
      fail("unknown [classifier] key '" + key + "'");
    }
  }

  void context_key(const std::string& key, const std::string& value) {
    auto& c = cfg_.contexts.at(section_arg_);
    if (key == "window_ms") {
      c.window_ms = integer(value, key);
      return;
    }
    // 'eer <cid> = <target>' declares one classifier's target in this
    // context.
    std::istringstream parts(key);
    std::string head, cid, extra;
    parts >> head >> cid >> extra;
    if (head == "eer" && is_identifier(cid) && extra.empty()) {
      if (!c.eer_targets.emplace(cid, number(value, key)).second) {
        fail("duplicate eer target for classifier '" + cid + "'");
      }
      return;
    }
    fail("unknown [context] key '" + key + "'");
  }

  void norm_key(const std::string& key, const std::string& value) {
    auto& n = cfg_.norms.at(section_arg_);
    if (key == "mu") {
      n.mu = number(value, key);
    } else if (key == "sigma") {
      n.sigma = number(value, key);
    } else {
      fail("unknown [norm] key '" + key + "'");
    }
  }

  void scenario_key(const std::string& key, const std::string& value) {
    if (key == "duration_ms") {
      cfg_.scenario->duration = integer(value, key);
    } else {
      fail("unknown [scenario] key '" + key + "'");
    }
  }

  void segment_key(const std::string& key, const std::string& value) {
    auto& seg = cfg_.scenario->segments.back();
    if (key == "start_ms") {
      seg.start = integer(value, key);
    } else if (key == "context") {
      if (!is_identifier(value)) {
        fail("invalid context label '" + value + "'");
      }
      seg.context = value;
    } else if (key == "subject") {
      if (value == "genuine") {
        seg.genuine = true;
      } else if (value == "impostor") {
        seg.genuine = false;
      } else {
        fail("subject must be 'genuine' or 'impostor'");
      }
    } else {
      fail("unknown [segment] key '" + key + "'");
    }
  }

  void finish() {
    cfg_.source_hash = hash_;
    if (cfg_.scenario.has_value()) {
      cfg_.scenario->seed = cfg_.seed;
    }
  }

  std::istream& in_;
  std::string origin_;
  std::size_t line_ = 0;
  std::uint64_t hash_ = 0xcbf29ce484222325ull;
  ExperimentConfig cfg_;
  std::string section_;      // empty = top level
  std::string section_arg_;
  std::set<std::string> seen_keys_;
  bool policy_seen_ = false;
};

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& origin) {
  return Parser(in, origin).parse();
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  return parse_config(in, path);
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.classifiers.empty()) {
    throw ConfigError("config declares no classifiers");
  }
  if (cfg.contexts.empty()) {
    throw ConfigError("config declares no contexts");
  }
  if (!(cfg.th_p >= 0.0 && cfg.th_p <= 1.0)) {
    throw ConfigError("th_p must lie in [0, 1]");
  }
  if (!std::isfinite(cfg.th_beta)) {
    throw ConfigError("th_beta must be finite");
  }
  if (cfg.dt_delay <= 0) {
    throw ConfigError("delay_ms must be positive");
  }
  if (cfg.trials == 0) {
    throw ConfigError("trials must be at least 1");
  }
  if (cfg.training_samples < 2) {
    throw ConfigError("training_samples must be at least 2");
  }
  if (!(cfg.grid_step > 0.0 && cfg.grid_step <= 1.0)) {
    throw ConfigError("grid_step must lie in (0, 1]");
  }
  const auto m = std::llround(1.0 / cfg.grid_step);
  if (m < 1 || std::abs(static_cast<double>(m) * cfg.grid_step - 1.0) > 1e-9) {
    throw ConfigError("grid_step must divide 1 evenly");
  }
  if (cfg.out_dir.empty()) {
    throw ConfigError("out_dir must not be empty");
  }

  for (const auto& [cid, c] : cfg.classifiers) {
    if (c.time_ms <= 0) {
      throw ConfigError("classifier '" + cid + "': time_ms must be positive");
    }
    if (!(std::isfinite(c.cost) && c.cost >= 0.0)) {
      throw ConfigError("classifier '" + cid +
                        "': cost must be finite and non-negative");
    }
  }

  int max_k = 1;
  std::set<std::string> seen_approaches;
  for (const auto& name : cfg.approaches) {
    if (!seen_approaches.insert(name).second) {
      throw ConfigError("approach '" + name + "' listed twice");
    }
    const auto spec = ApproachSpec::parse(name);
    if (spec.kind == ApproachSpec::Kind::ours) {
      max_k = std::max(max_k, spec.k);
    }
  }

  for (const auto& [label, ctx] : cfg.contexts) {
    if (ctx.window_ms <= 0) {
      throw ConfigError("context '" + label +
                        "': window_ms must be positive");
    }
    for (const auto& [cid, target] : ctx.eer_targets) {
      if (!cfg.classifiers.contains(cid)) {
        throw ConfigError("context '" + label +
                          "': eer target references unknown classifier '" +
                          cid + "'");
      }
      if (!(target > 0.0 && target < 0.5)) {
        throw ConfigError("context '" + label + "': eer target for '" + cid +
                          "' must lie in (0, 0.5)");
      }
    }
    for (const auto& [cid, c] : cfg.classifiers) {
      if (!ctx.eer_targets.contains(cid)) {
        throw ConfigError("context '" + label +
                          "' is missing an eer target for classifier '" + cid +
                          "'");
      }
    }
    if (!cfg.approaches.empty() &&
        static_cast<TimeInstant>(max_k - 1) * cfg.dt_delay >= ctx.window_ms) {
      throw ConfigError(
          "context '" + label + "': window_ms " +
          std::to_string(ctx.window_ms) + " cannot hold " +
          std::to_string(max_k) + " samples spaced delay_ms apart");
    }
  }

  for (const auto& [cid, np] : cfg.norms) {
    if (!cfg.classifiers.contains(cid)) {
      throw ConfigError("norm section references unknown classifier '" + cid +
                        "'");
    }
    if (!std::isfinite(np.mu) || !(np.sigma > 0.0) || !std::isfinite(np.sigma)) {
      throw ConfigError("norm for classifier '" + cid +
                        "' needs finite mu and sigma > 0");
    }
  }

  if (cfg.scenario.has_value()) {
    const Scenario& sc = *cfg.scenario;
    if (sc.duration <= 0) {
      throw ConfigError("scenario duration_ms must be positive");
    }
    if (sc.segments.empty()) {
      throw ConfigError("scenario needs at least one [segment]");
    }
    if (sc.segments.front().start != 0) {
      throw ConfigError("the first segment must have start_ms = 0");
    }
    for (std::size_t i = 0; i < sc.segments.size(); ++i) {
      const auto& seg = sc.segments[i];
      if (seg.context.empty()) {
        throw ConfigError("segment " + std::to_string(i + 1) +
                          " is missing a context");
      }
      if (!cfg.contexts.contains(seg.context)) {
        throw ConfigError("segment " + std::to_string(i + 1) +
                          " references undeclared context '" + seg.context +
                          "'");
      }
      if (i > 0 && seg.start <= sc.segments[i - 1].start) {
        throw ConfigError("segment start times must be strictly increasing");
      }
      if (seg.start >= sc.duration) {
        throw ConfigError("segment " + std::to_string(i + 1) +
                          " starts at or after the scenario end");
      }
    }
  }

  if (cfg.approaches.empty() && !cfg.scenario.has_value()) {
    throw ConfigError(
        "config declares neither approaches nor a scenario; nothing to run");
  }
}

}  // namespace tdf
