#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atcsim/agents.hpp"
#include "atcsim/airspace.hpp"
#include "atcsim/disturbance.hpp"
#include "atcsim/messaging.hpp"

namespace atcsim {

// Nominal phase dwell times in seconds; each entry is jittered per aircraft
// when the phase starts.
struct PhaseDurations {
  int at_entry_gate_s = 60;
  int on_path_s = 300;
  int to_metering_fix_s = 120;
  int at_metering_fix_s = 60;
  int final_descent_s = 180;
  int on_runway_s = 60;
  int backtrack_s = 90;
  int holding_lap_s = 240;
};

struct TrafficModel {
  double arrival_rate_per_hr = 17.0;
  double departure_rate_per_hr = 21.0;
  PhaseDurations durations;
  double jitter_frac = 0.10;
};

struct Timeouts {
  int heartbeat_s = 5;
  int failover_timeout_s = 30;
  int escalation_deadline_s = 120;
};

struct OpsTunables {
  int pipeline_cap = 3;
  int alternate_corridors = 1;
  int climbout_s = 300;
  int blockage_s = 300;
  double initial_fuel_min = 180.0;
  int starvation_bound_min = 90;
};

// Complete description of one run, minus the seed.
struct ScenarioFile {
  int version = 1;
  std::string name;
  double duration_hr = 1.0;
  bool strict_mode = false;
  AirspaceConfig airspace;
  TrafficModel traffic;
  CauseModel causes;
  NetworkModel network;
  Timeouts timeouts;
  OpsTunables ops;
  std::vector<ScriptedRecord> scripted_events;
};

struct ParseOutcome {
  std::optional<ScenarioFile> scenario;
  std::vector<std::string> errors;  // every problem found, not just the first

  bool ok() const { return scenario.has_value() && errors.empty(); }
};

ParseOutcome parse_scenario(std::string_view text);

// Canonical serialization: parse(serialize(s)) == s, and the scenario hash
// is defined over this exact text.
std::string serialize_scenario(const ScenarioFile& s);

// FNV-1a over the canonical serialization, as fixed-width hex.
std::string scenario_hash(const ScenarioFile& s);

// Bundled scenarios compiled into the binary. Returns nullptr for an
// unknown name.
const char* builtin_scenario(std::string_view name);
std::vector<std::string> builtin_scenario_names();

// Reads "builtin:<name>" or a filesystem path. Throws NotFound when neither
// resolves.
std::string load_scenario_text(const std::string& ref);

}  // namespace atcsim
