#include <sstream>
#include <string>

#include "doctest.h"
#include "tdf/config.hpp"

using namespace tdf;

namespace {

ExperimentConfig parse_string(const std::string& text,
                              const std::string& origin = "test") {
  std::istringstream in(text);
  return parse_config(in, origin);
}

// Expects the parse to fail and returns the message for inspection.
std::string parse_error(const std::string& text) {
  try {
    (void)parse_string(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

std::string validation_error(const ExperimentConfig& cfg) {
  try {
    validate_config(cfg);
  } catch (const ConfigError& e) {
    return e.what();
  }
  FAIL("expected a validation error");
  return {};
}

const std::string kFullConfig = R"(# experiment settings
seed = 42
trials = 900
training_samples = 50
grid_step = 0.1
out_dir = out/test
approaches = max , sum,cwma,  our_2x

[policy]
th_p = 0.85
th_beta = -0.25
delay_ms = 500

[classifier c1]
time_ms = 400
cost = 2.5

[classifier c2]   # trailing comment on the header

[context SF]
window_ms = 3000
eer c1 = 0.027
eer c2 = 0.204

[context P]
window_ms = 2500
eer c1 = 0.112
eer c2 = 0.092

[norm c1]
mu = 0.5
sigma = 2

[scenario]
duration_ms = 9000

[segment]
start_ms = 0
context = SF
subject = genuine

[segment]
start_ms = 4000
context = P
subject = impostor
)";

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("a full config parses into the expected structure") {
    const auto cfg = parse_string(kFullConfig);

    CHECK(cfg.seed == 42);
    CHECK(cfg.trials == 900);
    CHECK(cfg.training_samples == 50);
    CHECK(cfg.grid_step == doctest::Approx(0.1));
    CHECK(cfg.out_dir == "out/test");
    CHECK(cfg.approaches ==
          std::vector<std::string>{"max", "sum", "cwma", "our_2x"});

    CHECK(cfg.th_p == doctest::Approx(0.85));
    CHECK(cfg.th_beta == doctest::Approx(-0.25));
    CHECK(cfg.dt_delay == 500);

    REQUIRE(cfg.classifiers.size() == 2);
    CHECK(cfg.classifiers.at("c1").time_ms == 400);
    CHECK(cfg.classifiers.at("c1").cost == doctest::Approx(2.5));
    // c2 keeps the defaults.
    CHECK(cfg.classifiers.at("c2").time_ms == 1000);
    CHECK(cfg.classifiers.at("c2").cost == doctest::Approx(1.0));

    REQUIRE(cfg.contexts.size() == 2);
    CHECK(cfg.contexts.at("SF").window_ms == 3000);
    CHECK(cfg.contexts.at("SF").eer_targets.at("c1") == doctest::Approx(0.027));
    CHECK(cfg.contexts.at("SF").eer_targets.at("c2") == doctest::Approx(0.204));
    CHECK(cfg.contexts.at("P").window_ms == 2500);
    CHECK(cfg.contexts.at("P").eer_targets.at("c2") == doctest::Approx(0.092));

    REQUIRE(cfg.norms.size() == 1);
    CHECK(cfg.norms.at("c1").mu == doctest::Approx(0.5));
    CHECK(cfg.norms.at("c1").sigma == doctest::Approx(2.0));

    REQUIRE(cfg.scenario.has_value());
    CHECK(cfg.scenario->duration == 9000);
    CHECK(cfg.scenario->seed == 42);  // inherited from the top-level seed
    REQUIRE(cfg.scenario->segments.size() == 2);
    CHECK(cfg.scenario->segments[0].start == 0);
    CHECK(cfg.scenario->segments[0].context == "SF");
    CHECK(cfg.scenario->segments[0].genuine);
    CHECK(cfg.scenario->segments[1].start == 4000);
    CHECK_FALSE(cfg.scenario->segments[1].genuine);

    CHECK_NOTHROW(validate_config(cfg));
  }

  TEST_CASE("defaults apply when keys are omitted") {
    const auto cfg = parse_string(
        "[classifier c1]\n[context SF]\neer c1 = 0.1\n", "d");
    CHECK(cfg.seed == 1);
    CHECK(cfg.trials == 2000);
    CHECK(cfg.training_samples == 400);
    CHECK(cfg.grid_step == doctest::Approx(0.02));
    CHECK(cfg.out_dir == "out");
    CHECK(cfg.th_p == doctest::Approx(0.9));
    CHECK(cfg.th_beta == doctest::Approx(0.0));
    CHECK(cfg.dt_delay == 1000);
    CHECK(cfg.contexts.at("SF").window_ms == 4000);
    CHECK_FALSE(cfg.scenario.has_value());
  }

  TEST_CASE("errors carry origin and line number") {
    // Line 2 lacks '='.
    const auto msg = parse_error("seed = 1\nseed 42\n");
    CHECK(msg == std::string("test:2: expected 'key = value'"));
  }

  TEST_CASE("malformed values are rejected with the offending key") {
    CHECK(parse_error("seed = banana\n").find(
              "invalid unsigned integer 'banana' for key 'seed'") !=
          std::string::npos);
    CHECK(parse_error("grid_step = 0.02x\n").find(
              "invalid number '0.02x' for key 'grid_step'") !=
          std::string::npos);
    CHECK(parse_error("[policy]\ndelay_ms = 1.5\n").find(
              "invalid integer '1.5' for key 'delay_ms'") !=
          std::string::npos);
    CHECK(parse_error("seed =\n").find("missing value for key 'seed'") !=
          std::string::npos);
  }

  TEST_CASE("section header syntax") {
    CHECK(parse_error("[policy\n").find("unterminated section header") !=
          std::string::npos);
    CHECK(parse_error("[mystery]\n").find("unknown section [mystery]") !=
          std::string::npos);
    CHECK(parse_error("[classifier]\n").find("needs an identifier argument") !=
          std::string::npos);
    CHECK(parse_error("[classifier a b]\n").find(
              "section header has too many fields") != std::string::npos);
    CHECK(parse_error("[policy extra]\n").find(
              "section [policy] takes no argument") != std::string::npos);
    CHECK(parse_error("[segment]\n").find(
              "[segment] must follow a [scenario] section") !=
          std::string::npos);
  }

  TEST_CASE("duplicate sections and keys are rejected") {
    CHECK(parse_error("[classifier c1]\n[classifier c1]\n").find(
              "duplicate classifier 'c1'") != std::string::npos);
    CHECK(parse_error("[context SF]\n[context SF]\n").find(
              "duplicate context 'SF'") != std::string::npos);
    CHECK(parse_error("[policy]\n[policy]\n").find(
              "duplicate [policy] section") != std::string::npos);
    CHECK(parse_error("seed = 1\nseed = 2\n").find("duplicate key 'seed'") !=
          std::string::npos);
    CHECK(parse_error("[context SF]\neer c1 = 0.1\neer c1 = 0.2\n").find(
              "duplicate key 'eer c1'") != std::string::npos);
    // Same target through a differently spelled key is still a duplicate.
    CHECK(parse_error("[context SF]\neer c1 = 0.1\neer  c1 = 0.2\n").find(
              "duplicate eer target for classifier 'c1'") !=
          std::string::npos);
    // The same key in two different sections is fine.
    CHECK_NOTHROW(parse_string(
        "[classifier c1]\ncost = 1\n[classifier c2]\ncost = 2\n"));
  }

  TEST_CASE("unknown keys name their section") {
    CHECK(parse_error("mystery = 1\n").find(
              "unknown top-level key 'mystery'") != std::string::npos);
    CHECK(parse_error("[policy]\nmystery = 1\n").find(
              "unknown [policy] key 'mystery'") != std::string::npos);
    CHECK(parse_error("[classifier c1]\nmystery = 1\n").find(
              "unknown [classifier] key 'mystery'") != std::string::npos);
    CHECK(parse_error("[context SF]\neer = 0.1\n").find(
              "unknown [context] key 'eer'") != std::string::npos);
    CHECK(parse_error("[norm c1]\nmystery = 1\n").find(
              "unknown [norm] key 'mystery'") != std::string::npos);
  }

  TEST_CASE("approach names are validated at parse time") {
    const auto msg = parse_error("approaches = max, our_0x\n");
    CHECK(msg.find("test:1:") != std::string::npos);
    CHECK(msg.find("our_0x") != std::string::npos);
    CHECK(parse_error("approaches = max,,sum\n").find(
              "empty entry in approaches list") != std::string::npos);
  }

  TEST_CASE("segment subject must be genuine or impostor") {
    const std::string prefix =
        "[scenario]\nduration_ms = 100\n[segment]\n";
    CHECK(parse_error(prefix + "subject = ghost\n").find(
              "subject must be 'genuine' or 'impostor'") != std::string::npos);
  }

  TEST_CASE("validation rejects out-of-range policy settings") {
    auto base = [] {
      return parse_string(
          "approaches = max\n[classifier c1]\n[context SF]\neer c1 = 0.1\n");
    };

    auto cfg = base();
    cfg.th_p = 1.5;
    CHECK(validation_error(cfg) == "th_p must lie in [0, 1]");

    cfg = base();
    cfg.dt_delay = 0;
    CHECK(validation_error(cfg) == "delay_ms must be positive");

    cfg = base();
    cfg.trials = 0;
    CHECK(validation_error(cfg) == "trials must be at least 1");

    cfg = base();
    cfg.training_samples = 1;
    CHECK(validation_error(cfg) == "training_samples must be at least 2");

    cfg = base();
    cfg.grid_step = 0.3;
    CHECK(validation_error(cfg) == "grid_step must divide 1 evenly");

    cfg = base();
    cfg.grid_step = -0.1;
    CHECK(validation_error(cfg) == "grid_step must lie in (0, 1]");

    cfg = base();
    cfg.out_dir.clear();
    CHECK(validation_error(cfg) == "out_dir must not be empty");
  }

  TEST_CASE("validation ties targets, classifiers, and norms together") {
    // Every context must cover every classifier...
    auto cfg = parse_string(
        "approaches = max\n[classifier c1]\n[classifier c2]\n"
        "[context SF]\neer c1 = 0.1\n");
    CHECK(validation_error(cfg).find(
              "missing an eer target for classifier 'c2'") !=
          std::string::npos);

    // ...and may not reference classifiers that don't exist.
    cfg = parse_string(
        "approaches = max\n[classifier c1]\n"
        "[context SF]\neer c1 = 0.1\neer c9 = 0.1\n");
    CHECK(validation_error(cfg).find("unknown classifier 'c9'") !=
          std::string::npos);

    // Targets must be strictly inside (0, 0.5).
    cfg = parse_string(
        "approaches = max\n[classifier c1]\n[context SF]\neer c1 = 0.5\n");
    CHECK(validation_error(cfg).find("must lie in (0, 0.5)") !=
          std::string::npos);

    // Norm sections must name a declared classifier.
    cfg = parse_string(
        "approaches = max\n[classifier c1]\n[context SF]\neer c1 = 0.1\n"
        "[norm cX]\nmu = 0\nsigma = 1\n");
    CHECK(validation_error(cfg).find(
              "norm section references unknown classifier 'cX'") !=
          std::string::npos);

    cfg = parse_string(
        "approaches = max\n[classifier c1]\n[context SF]\neer c1 = 0.1\n"
        "[norm c1]\nmu = 0\nsigma = 0\n");
    CHECK(validation_error(cfg).find("sigma > 0") != std::string::npos);
  }

  TEST_CASE("multi-sample approaches need a window that spans the cadence") {
    // our_3x needs (3-1)*delay < window; 2000 ms at delay 1000 fails.
    auto cfg = parse_string(
        "approaches = our_3x\n[policy]\ndelay_ms = 1000\n"
        "[classifier c1]\n[context SF]\nwindow_ms = 2000\neer c1 = 0.1\n");
    CHECK(validation_error(cfg).find("cannot hold 3 samples") !=
          std::string::npos);
    cfg.contexts.at("SF").window_ms = 2001;
    CHECK_NOTHROW(validate_config(cfg));
  }

  TEST_CASE("scenario validation rules") {
    const std::string decl =
        "[classifier c1]\n[context SF]\neer c1 = 0.1\n[context P]\neer c1 = "
        "0.2\n";

    auto cfg = parse_string(decl + "[scenario]\nduration_ms = 1000\n");
    CHECK(validation_error(cfg) == "scenario needs at least one [segment]");

    cfg = parse_string(decl +
                       "[scenario]\nduration_ms = 1000\n[segment]\nstart_ms = "
                       "5\ncontext = SF\n");
    CHECK(validation_error(cfg) == "the first segment must have start_ms = 0");

    cfg = parse_string(
        decl +
        "[scenario]\nduration_ms = 1000\n[segment]\nstart_ms = 0\ncontext = "
        "SF\n[segment]\nstart_ms = 0\ncontext = P\n");
    CHECK(validation_error(cfg) ==
          "segment start times must be strictly increasing");

    cfg = parse_string(
        decl +
        "[scenario]\nduration_ms = 1000\n[segment]\nstart_ms = 0\ncontext = "
        "Q\n");
    CHECK(validation_error(cfg).find("undeclared context 'Q'") !=
          std::string::npos);

    cfg = parse_string(
        decl +
        "[scenario]\nduration_ms = 100\n[segment]\nstart_ms = 0\ncontext = "
        "SF\n[segment]\nstart_ms = 500\ncontext = P\n");
    CHECK(validation_error(cfg).find("starts at or after the scenario end") !=
          std::string::npos);

    cfg = parse_string(decl + "[scenario]\nduration_ms = -5\n");
    CHECK(validation_error(cfg) == "scenario duration_ms must be positive");
  }

  TEST_CASE("a config with nothing to run is rejected") {
    const auto cfg =
        parse_string("[classifier c1]\n[context SF]\neer c1 = 0.1\n");
    CHECK(validation_error(cfg) ==
          "config declares neither approaches nor a scenario; nothing to run");
  }

  TEST_CASE("the source hash tracks content, not origin") {
    const auto a = parse_string("seed = 1\n[classifier c1]\n", "a");
    const auto b = parse_string("seed = 1\n[classifier c1]\n", "b");
    const auto c = parse_string("seed = 2\n[classifier c1]\n", "a");
    CHECK(a.source_hash == b.source_hash);
    CHECK(a.source_hash != c.source_hash);
    // Comments count toward the hash: the recorded provenance is the file
    // text, not the parsed result.
    const auto d = parse_string("seed = 1\n[classifier c1]\n# note\n", "a");
    CHECK(a.source_hash != d.source_hash);
  }
}
