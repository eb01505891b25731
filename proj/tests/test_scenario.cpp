#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "doctest.h"

#include "atcsim/errors.hpp"
#include "atcsim/scenario.hpp"

using namespace atcsim;

TEST_CASE("the bundled scenarios parse cleanly") {
  CHECK(builtin_scenario_names() ==
        std::vector<std::string>{"mumbai", "mumbai-lossy", "mumbai-surge"});
  CHECK(builtin_scenario("anywhere-else") == nullptr);

  for (const std::string& name : builtin_scenario_names()) {
    CAPTURE(name);
    const char* text = builtin_scenario(name);
    REQUIRE(text != nullptr);
    ParseOutcome out = parse_scenario(text);
    CHECK(out.errors.empty());
    REQUIRE(out.ok());
    CHECK(out.scenario->name == name);
    CHECK(out.scenario->strict_mode);
  }
}

TEST_CASE("mumbai carries the expected field layout") {
  ParseOutcome out = parse_scenario(builtin_scenario("mumbai"));
  REQUIRE(out.ok());
  const ScenarioFile& s = *out.scenario;

  CHECK(s.duration_hr == doctest::Approx(4.0));
  CHECK(s.traffic.arrival_rate_per_hr == doctest::Approx(17.0));
  CHECK(s.traffic.departure_rate_per_hr == doctest::Approx(21.0));
  CHECK(s.airspace.queue_capacity == 12);
  CHECK(s.airspace.entry_gates == 2);
  CHECK(s.airspace.separation_s == 90);
  CHECK(s.airspace.holding.level_capacity == 3);
  CHECK(s.timeouts.heartbeat_s == 5);
  CHECK(s.timeouts.failover_timeout_s == 30);
  CHECK(s.ops.pipeline_cap == 3);
  CHECK(s.ops.alternate_corridors == 1);

  // A single landing strip whose exit taxi crosses the takeoff strip; the
  // two runways exclude each other.
  REQUIRE(s.airspace.runways.size() == 2);
  CHECK(s.airspace.runways[0].id == "RW27");
  CHECK(s.airspace.runways[0].mode == RunwayMode::Landing);
  CHECK(s.airspace.runways[0].crosses == std::vector<std::string>{"RW14"});
  CHECK(s.airspace.runways[1].id == "RW14");
  CHECK(s.airspace.runways[1].mode == RunwayMode::Takeoff);
  CHECK(s.airspace.runways[1].crosses == std::vector<std::string>{"RW27"});

  ParseOutcome lossy = parse_scenario(builtin_scenario("mumbai-lossy"));
  REQUIRE(lossy.ok());
  CHECK(lossy.scenario->network.air.latency_lo_s == 1);
  CHECK(lossy.scenario->network.air.latency_hi_s == 3);
  CHECK(lossy.scenario->network.air.loss_prob == doctest::Approx(0.05));
  CHECK(lossy.scenario->network.ground.loss_prob == doctest::Approx(0.02));

  ParseOutcome surge = parse_scenario(builtin_scenario("mumbai-surge"));
  REQUIRE(surge.ok());
  CHECK(surge.scenario->traffic.arrival_rate_per_hr == doctest::Approx(22.0));
  CHECK(surge.scenario->causes.weather_deviation == doctest::Approx(0.008));
}

TEST_CASE("the bundled scenario hashes are frozen") {
  auto hash_of = [](const char* name) {
    ParseOutcome out = parse_scenario(builtin_scenario(name));
    REQUIRE(out.ok());
    return scenario_hash(*out.scenario);
  };
  // Any change to a bundled scenario or to the canonical serialization breaks
  // every recorded run of that scenario; these values only move deliberately.
  CHECK(hash_of("mumbai") == "099be24bed98523e");
  CHECK(hash_of("mumbai-lossy") == "ba73300fa0b9db75");
  CHECK(hash_of("mumbai-surge") == "0681f20881ec3807");
}

TEST_CASE("serialization is a fixpoint under reparsing") {
  for (const std::string& name : builtin_scenario_names()) {
    CAPTURE(name);
    ParseOutcome first = parse_scenario(builtin_scenario(name));
    REQUIRE(first.ok());
    std::string text = serialize_scenario(*first.scenario);
    CHECK(text.rfind("{\n  \"version\": 1", 0) == 0);
    CHECK(text.back() == '\n');

    ParseOutcome second = parse_scenario(text);
    REQUIRE(second.ok());
    CHECK(serialize_scenario(*second.scenario) == text);
    CHECK(scenario_hash(*second.scenario) == scenario_hash(*first.scenario));
  }
}

TEST_CASE("the hash tracks content, not identity") {
  ParseOutcome out = parse_scenario(builtin_scenario("mumbai"));
  REQUIRE(out.ok());
  ScenarioFile s = *out.scenario;
  std::string base = scenario_hash(s);

  REQUIRE(base.size() == 16);
  for (char c : base) {
    CHECK((std::isdigit(static_cast<unsigned char>(c)) ||
           (c >= 'a' && c <= 'f')));
  }
  CHECK(scenario_hash(s) == base);  // stable across calls

  s.airspace.separation_s = 91;
  std::string bumped = scenario_hash(s);
  CHECK(bumped != base);
  s.airspace.separation_s = 90;
  CHECK(scenario_hash(s) == base);

  s.name = "mumbai2";
  CHECK(scenario_hash(s) != base);
}

TEST_CASE("a minimal scenario inherits every default") {
  ParseOutcome out = parse_scenario(
      R"({"name": "tiny",
          "airspace": {"runways": [{"id": "R1", "mode": "landing"}]}})");
  REQUIRE(out.ok());
  const ScenarioFile& s = *out.scenario;

  CHECK(s.version == 1);
  CHECK(s.duration_hr == doctest::Approx(1.0));
  CHECK(!s.strict_mode);
  CHECK(s.airspace.radius_nm == doctest::Approx(40.0));
  CHECK(s.airspace.queue_capacity == 12);
  CHECK(s.airspace.entry_gates == 2);
  CHECK(s.airspace.holding.base_altitude_ft == doctest::Approx(7000.0));
  CHECK(s.airspace.holding.band_width_ft == doctest::Approx(1000.0));
  CHECK(s.airspace.holding.level_capacity == 3);
  CHECK(s.traffic.arrival_rate_per_hr == doctest::Approx(17.0));
  CHECK(s.traffic.jitter_frac == doctest::Approx(0.10));
  CHECK(s.traffic.durations.at_entry_gate_s == 60);
  CHECK(s.traffic.durations.on_path_s == 300);
  CHECK(s.traffic.durations.holding_lap_s == 240);
  CHECK(s.causes.weather_deviation == doctest::Approx(0.004));
  CHECK(s.causes.runway_blockage == doctest::Approx(0.0005));
  CHECK(s.network.air.latency_lo_s == 1);
  CHECK(s.network.air.latency_hi_s == 1);
  CHECK(s.network.ground.loss_prob == doctest::Approx(0.0));
  CHECK(s.timeouts.escalation_deadline_s == 120);
  CHECK(s.ops.climbout_s == 300);
  CHECK(s.ops.blockage_s == 300);
  CHECK(s.ops.initial_fuel_min == doctest::Approx(180.0));
  CHECK(s.ops.starvation_bound_min == 90);
  CHECK(s.scripted_events.empty());
}

TEST_CASE("structural problems are reported with their paths") {
  ParseOutcome bad = parse_scenario("{{{");
  CHECK(!bad.ok());
  CHECK(bad.errors == std::vector<std::string>{"document: not valid JSON"});

  ParseOutcome arr = parse_scenario("[1, 2]");
  CHECK(arr.errors ==
        std::vector<std::string>{"document: expected an object"});

  ParseOutcome empty = parse_scenario("{}");
  CHECK(!empty.ok());
  CHECK(!empty.scenario.has_value());
  CHECK(empty.errors ==
        std::vector<std::string>{"name: must not be empty",
                                 "airspace.runways must not be empty"});

  ParseOutcome typed = parse_scenario(
      R"({"name": 5, "duration_hr": "x", "strict_mode": "yes",
          "airspace": 3, "traffic": {"jitter_frac": "high"}})");
  CHECK(typed.errors ==
        std::vector<std::string>{"document.name: expected a string",
                                 "document.duration_hr: expected a number",
                                 "document.strict_mode: expected a boolean",
                                 "airspace: expected an object",
                                 "traffic.jitter_frac: expected a number",
                                 "name: must not be empty",
                                 "airspace.runways must not be empty"});
}

TEST_CASE("every semantic violation is collected in one pass") {
  ParseOutcome out = parse_scenario(R"({
    "version": 2,
    "name": "",
    "duration_hr": -1.0,
    "airspace": {"runways": [{"id": "R1", "mode": "landing"}]},
    "traffic": {"arrival_rate_per_hr": -3.0, "jitter_frac": 1.0,
                "phase_durations_s": {"on_path": 0}},
    "causes": {"weather_deviation": 1.5},
    "network": {"air": {"latency_s": [3, 1]}, "ground": {"loss_prob": 1.0}},
    "timeouts": {"heartbeat_s": 30, "failover_timeout_s": 30},
    "ops": {"pipeline_cap": 0, "alternate_corridors": -1, "climbout_s": 0,
            "initial_fuel_min": 0.0, "starvation_bound_min": 0}
  })");
  CHECK(!out.ok());
  CHECK(out.errors ==
        std::vector<std::string>{
            "version: only version 1 is understood",
            "name: must not be empty",
            "duration_hr: must be positive",
            "causes.WeatherDeviation must be within [0, 1]",
            "causes: combined per-minute probability exceeds 1",
            "traffic: rates must be non-negative",
            "traffic.jitter_frac: must be within [0, 1)",
            "traffic.phase_durations_s: all durations must be positive",
            "network: latency range must satisfy 0 <= lo <= hi",
            "network: loss_prob must be within [0, 1)",
            "timeouts: failover_timeout_s must exceed heartbeat_s",
            "ops.pipeline_cap: must be at least 1",
            "ops.alternate_corridors: must be non-negative",
            "ops: climbout_s and blockage_s must be positive",
            "ops.initial_fuel_min: must be positive",
            "ops.starvation_bound_min: must be at least 1"});
}

TEST_CASE("scripted events are validated record by record") {
  ParseOutcome out = parse_scenario(R"({
    "name": "scripted",
    "duration_hr": 1.0,
    "airspace": {"runways": [{"id": "R1", "mode": "landing"}]},
    "scripted_events": [
      {"time": 3600, "kind": "arrival"},
      {"time": 10, "kind": "quake"},
      {"time": 20, "kind": "kill_supervisor",
       "payload": {"role": "TOWER", "duration_s": 0}},
      {"time": 30, "kind": "fms_route_amendment"},
      {"time": -1, "kind": "departure"}
    ]
  })");
  CHECK(out.errors ==
        std::vector<std::string>{
            "scripted_events[0]: time outside the run horizon",
            "scripted_events[1]: unknown kind \"quake\"",
            "scripted_events[2]: kill_supervisor needs role ATC or TRACON",
            "scripted_events[2]: kill_supervisor needs a positive duration_s",
            "scripted_events[3]: fms_route_amendment needs a flight id",
            "scripted_events[4]: time outside the run horizon"});

  ParseOutcome good = parse_scenario(R"({
    "name": "scripted",
    "duration_hr": 1.0,
    "airspace": {"runways": [{"id": "R1", "mode": "landing"}]},
    "scripted_events": [
      {"time": 0, "kind": "arrival"},
      {"time": 5, "kind": "departure"},
      {"time": 10, "kind": "kill_supervisor",
       "payload": {"role": "TRACON", "duration_s": 60}},
      {"time": 20, "kind": "fms_route_amendment", "payload": {"flight": "AR0001"}},
      {"time": 30, "kind": "uret_advisory", "payload": {"flight": "AR0001"}},
      {"time": 40, "kind": "smr_status", "payload": {}}
    ]
  })");
  CHECK(good.errors == std::vector<std::string>{});
  REQUIRE(good.ok());
  CHECK(good.scenario->scripted_events.size() == 6);
  CHECK(good.scenario->scripted_events[2].payload.at("role") == "TRACON");
}

TEST_CASE("malformed substructures name the offending element") {
  auto errors_of = [](const char* text) {
    return parse_scenario(text).errors;
  };
  auto contains = [](const std::vector<std::string>& errs,
                     const std::string& needle) {
    for (const std::string& e : errs) {
      if (e == needle) return true;
    }
    return false;
  };

  CHECK(contains(errors_of(R"({"name":"x","airspace":{"runways":"RW"}})"),
                 "airspace.runways: expected an array"));
  CHECK(contains(errors_of(R"({"name":"x","airspace":{"runways":[7]}})"),
                 "airspace.runways[0]: expected an object"));
  CHECK(contains(
      errors_of(
          R"({"name":"x","airspace":{"runways":[{"id":"R1","mode":"hover"}]}})"),
      "airspace.runways[0].mode: expected landing or takeoff"));
  CHECK(contains(
      errors_of(
          R"({"name":"x","airspace":{"runways":[{"id":"R1","mode":"landing","crosses":"R2"}]}})"),
      "airspace.runways[0].crosses: expected an array"));
  CHECK(contains(
      errors_of(
          R"({"name":"x","airspace":{"runways":[{"id":"R1","mode":"landing","crosses":[3]}]}})"),
      "airspace.runways[0].crosses: entries must be strings"));
  CHECK(contains(
      errors_of(
          R"({"name":"x","airspace":{"runways":[{"id":"R1","mode":"landing"}]},"network":{"air":{"latency_s":[1]}}})"),
      "network.air.latency_s: expected [lo, hi] integers"));
  CHECK(contains(
      errors_of(
          R"({"name":"x","airspace":{"runways":[{"id":"R1","mode":"landing"}]},"network":{"air":{"latency_s":[1.5,2]}}})"),
      "network.air.latency_s: expected [lo, hi] integers"));
  CHECK(contains(
      errors_of(
          R"({"name":"x","airspace":{"runways":[{"id":"R1","mode":"landing"}]},"scripted_events":{}})"),
      "scripted_events: expected an array"));
}

TEST_CASE("scenario text resolves from builtins and files") {
  CHECK(load_scenario_text("builtin:mumbai") ==
        std::string(builtin_scenario("mumbai")));

  CHECK_THROWS_WITH_AS(load_scenario_text("builtin:nope"),
                       "NotFound: no builtin scenario named nope", SimError);
  CHECK_THROWS_AS(load_scenario_text("definitely_missing_492.scenario"),
                  SimError);
  try {
    load_scenario_text("definitely_missing_492.scenario");
  } catch (const SimError& e) {
    CHECK(e.code() == Err::NotFound);
    CHECK(std::string(e.what()).find("cannot read scenario file") !=
          std::string::npos);
  }

  const char* path = "test_scenario_roundtrip.scenario";
  {
    std::ofstream f(path, std::ios::binary);
    REQUIRE(f.good());
    f << builtin_scenario("mumbai-lossy");
  }
  std::string loaded = load_scenario_text(path);
  CHECK(loaded == std::string(builtin_scenario("mumbai-lossy")));
  ParseOutcome out = parse_scenario(loaded);
  REQUIRE(out.ok());
  CHECK(out.scenario->name == "mumbai-lossy");
  std::remove(path);
}

#ifdef ATCSIM_SOURCE_DIR
TEST_CASE("the checked-in scenario files match the builtins") {
  // The scenarios directory exists so runs can reference the bundled setups
  // as plain files; it must never drift from what the binary embeds.
  for (const std::string& name : builtin_scenario_names()) {
    CAPTURE(name);
    std::string path =
        std::string(ATCSIM_SOURCE_DIR) + "/scenarios/" + name + ".scenario";
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), path);
    std::string file((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(file == std::string(builtin_scenario(name)) + "\n");
  }
}
#endif
