#include "doctest.h"
#include "stlcbf/scenario.hpp"

using namespace stlcbf;

namespace {

const char* kMinimal = R"json({
  "formula": "F[0,10](ball($goal, 0.2))",
  "waypoints": {"goal": [9.0, 3.0], "start": [0.0, 0.0]},
  "zones": {"default_vmax": 1.5},
  "obstacles": [],
  "dynamics": {"model": "identity"},
  "replan": {"p_i": 0.9, "p_r": 0.025, "floor": 0.1},
  "sim": {"dt": 0.01, "start": "start"}
})json";

}  // namespace

TEST_CASE("minimal scenario loads with waypoint substitution") {
  const ScenarioConfig cfg = parse_scenario(kMinimal, "mini");
  REQUIRE(cfg.formula.has_value());
  CHECK(cfg.formula_text == "F[0,10](ball([9,3], 0.2))");
  CHECK(cfg.formula->kind() == Formula::Kind::Eventually);
  CHECK(cfg.sim.dt == doctest::Approx(0.01));
  CHECK(cfg.world.standard_vmax == doctest::Approx(1.5));
  CHECK(cfg.dynamics.model == Dynamics::Model::Identity);
}

TEST_CASE("unknown waypoint reference is a validation error") {
  std::string text = kMinimal;
  text.replace(text.find("$goal"), 5, "$nope");
  CHECK_THROWS_WITH_AS(parse_scenario(text, "bad"), doctest::Contains("$nope"),
                       ConfigError);
}

TEST_CASE("p_i outside its admissible range is rejected with the range") {
  std::string text = kMinimal;
  text.replace(text.find("\"p_i\": 0.9"), 10, "\"p_i\": 0.4");
  CHECK_THROWS_WITH_AS(parse_scenario(text, "bad"), doctest::Contains("[0.5, 1)"),
                       ConfigError);
}

TEST_CASE("robustness threshold above the ball tolerance is rejected") {
  std::string text = kMinimal;
  const std::string needle = "\"barrier\"";
  std::string with_barrier = text;
  with_barrier.replace(with_barrier.find("\"replan\""), 8,
                       "\"barrier\": {\"r\": 0.3}, \"replan\"");
  CHECK_THROWS_WITH_AS(parse_scenario(with_barrier, "bad"),
                       doctest::Contains("(0, 0.2)"), ConfigError);
}

TEST_CASE("every violation is listed at once") {
  std::string text = kMinimal;
  text.replace(text.find("\"p_i\": 0.9"), 10, "\"p_i\": 0.4");
  text.replace(text.find("\"p_r\": 0.025"), 12, "\"p_r\": 0.5");
  text.replace(text.find("\"dt\": 0.01"), 10, "\"dt\": -1");
  try {
    parse_scenario(text, "bad");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("p_i") != std::string::npos);
    CHECK(what.find("p_r") != std::string::npos);
    CHECK(what.find("dt") != std::string::npos);
  }
}

TEST_CASE("clear() must reference a known obstacle") {
  std::string text = R"json({
    "formula": "G[0,5](clear(ghost, 1.0))",
    "obstacles": [{"id": "real", "radius": 0.3, "static": [1, 1]}],
    "sim": {"start": [0, 0]}
  })json";
  CHECK_THROWS_WITH_AS(parse_scenario(text, "bad"), doctest::Contains("ghost"),
                       ConfigError);
}

TEST_CASE("fragment violations surface as validation errors") {
  std::string text = kMinimal;
  text.replace(text.find("F[0,10](ball($goal, 0.2))"), 25,
               "!F[0,10](ball($goal, 0.2))");
  CHECK_THROWS_AS(parse_scenario(text, "bad"), ConfigError);
}

TEST_CASE("duplicate obstacle ids are rejected") {
  std::string text = R"json({
    "formula": "F[0,10](ball([1,1], 0.2))",
    "obstacles": [{"id": "o", "radius": 0.3, "static": [1, 1]},
                   {"id": "o", "radius": 0.3, "static": [2, 2]}],
    "sim": {"start": [0, 0]}
  })json";
  CHECK_THROWS_WITH_AS(parse_scenario(text, "bad"), doctest::Contains("duplicate"),
                       ConfigError);
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/missing.cfg"), ConfigError);
}
