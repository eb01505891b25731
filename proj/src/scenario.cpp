#include "atcsim/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "atcsim/errors.hpp"
#include "atcsim/rng.hpp"

namespace atcsim {

namespace {

using ErrList = std::vector<std::string>;

bool expect_object(const Json& j, const std::string& path, ErrList& errors) {
  if (j.is_object()) return true;
  errors.push_back(path + ": expected an object");
  return false;
}

double get_num(const Json& obj, const std::string& path, const char* key,
               double def, ErrList& errors) {
  if (!obj.contains(key)) return def;
  const Json& v = obj.at(key);
  if (!v.is_number()) {
    errors.push_back(path + "." + key + ": expected a number");
    return def;
  }
  return v.get<double>();
}

int get_int(const Json& obj, const std::string& path, const char* key, int def,
            ErrList& errors) {
  if (!obj.contains(key)) return def;
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) {
    errors.push_back(path + "." + key + ": expected an integer");
    return def;
  }
  return v.get<int>();
}

bool get_bool(const Json& obj, const std::string& path, const char* key,
              bool def, ErrList& errors) {
  if (!obj.contains(key)) return def;
  const Json& v = obj.at(key);
  if (!v.is_boolean()) {
    errors.push_back(path + "." + key + ": expected a boolean");
    return def;
  }
  return v.get<bool>();
}

std::string get_str(const Json& obj, const std::string& path, const char* key,
                    const std::string& def, ErrList& errors) {
  if (!obj.contains(key)) return def;
  const Json& v = obj.at(key);
  if (!v.is_string()) {
    errors.push_back(path + "." + key + ": expected a string");
    return def;
  }
  return v.get<std::string>();
}

LinkParams parse_link(const Json& obj, const std::string& path,
                      ErrList& errors) {
  LinkParams link;
  if (obj.contains("latency_s")) {
    const Json& lat = obj.at("latency_s");
    if (lat.is_array() && lat.size() == 2 && lat[0].is_number_integer() &&
        lat[1].is_number_integer()) {
      link.latency_lo_s = lat[0].get<int>();
      link.latency_hi_s = lat[1].get<int>();
    } else {
      errors.push_back(path + ".latency_s: expected [lo, hi] integers");
    }
  }
  link.loss_prob = get_num(obj, path, "loss_prob", 0.0, errors);
  return link;
}

void validate_semantics(const ScenarioFile& s, ErrList& errors) {
  if (s.version != 1) {
    errors.push_back("version: only version 1 is understood");
  }
  if (s.name.empty()) {
    errors.push_back("name: must not be empty");
  }
  if (s.duration_hr <= 0.0) {
    errors.push_back("duration_hr: must be positive");
  }
  for (const auto& e : s.airspace.validate()) errors.push_back(e);
  for (const auto& e : s.causes.validate()) errors.push_back(e);

  const TrafficModel& tr = s.traffic;
  if (tr.arrival_rate_per_hr < 0.0 || tr.departure_rate_per_hr < 0.0) {
    errors.push_back("traffic: rates must be non-negative");
  }
  if (tr.jitter_frac < 0.0 || tr.jitter_frac >= 1.0) {
    errors.push_back("traffic.jitter_frac: must be within [0, 1)");
  }
  const PhaseDurations& d = tr.durations;
  const int durs[] = {d.at_entry_gate_s,  d.on_path_s,    d.to_metering_fix_s,
                      d.at_metering_fix_s, d.final_descent_s, d.on_runway_s,
                      d.backtrack_s,       d.holding_lap_s};
  for (int v : durs) {
    if (v <= 0) {
      errors.push_back("traffic.phase_durations_s: all durations must be positive");
      break;
    }
  }
  for (const LinkParams* link : {&s.network.air, &s.network.ground}) {
    if (link->latency_lo_s < 0 || link->latency_hi_s < link->latency_lo_s) {
      errors.push_back("network: latency range must satisfy 0 <= lo <= hi");
    }
    if (link->loss_prob < 0.0 || link->loss_prob >= 1.0) {
      errors.push_back("network: loss_prob must be within [0, 1)");
    }
  }
  if (s.timeouts.heartbeat_s < 1 || s.timeouts.failover_timeout_s < 1 ||
      s.timeouts.escalation_deadline_s < 1) {
    errors.push_back("timeouts: all timeouts must be at least 1 s");
  }
  if (s.timeouts.failover_timeout_s <= s.timeouts.heartbeat_s) {
    errors.push_back(
        "timeouts: failover_timeout_s must exceed heartbeat_s");
  }
  if (s.ops.pipeline_cap < 1) {
    errors.push_back("ops.pipeline_cap: must be at least 1");
  }
  if (s.ops.alternate_corridors < 0) {
    errors.push_back("ops.alternate_corridors: must be non-negative");
  }
  if (s.ops.climbout_s < 1 || s.ops.blockage_s < 1) {
    errors.push_back("ops: climbout_s and blockage_s must be positive");
  }
  if (s.ops.initial_fuel_min <= 0.0) {
    errors.push_back("ops.initial_fuel_min: must be positive");
  }
  if (s.ops.starvation_bound_min < 1) {
    errors.push_back("ops.starvation_bound_min: must be at least 1");
  }

  static const char* kScriptedKinds[] = {
      "arrival",           "departure",     "kill_supervisor",
      "fms_route_amendment", "uret_advisory", "smr_status"};
  int64_t horizon = static_cast<int64_t>(s.duration_hr * 3600.0);
  for (size_t i = 0; i < s.scripted_events.size(); ++i) {
    const ScriptedRecord& rec = s.scripted_events[i];
    std::string path = "scripted_events[" + std::to_string(i) + "]";
    bool known = false;
    for (const char* k : kScriptedKinds) {
      if (rec.kind == k) known = true;
    }
    if (!known) {
      errors.push_back(path + ": unknown kind \"" + rec.kind + "\"");
    }
    if (rec.time < 0 || rec.time >= horizon) {
      errors.push_back(path + ": time outside the run horizon");
    }
    if (rec.kind == "kill_supervisor") {
      std::string role = rec.payload.value("role", "");
      if (role != kAtcId && role != kTraconId) {
        errors.push_back(path + ": kill_supervisor needs role ATC or TRACON");
      }
      if (!rec.payload.contains("duration_s") ||
          !rec.payload["duration_s"].is_number_integer() ||
          rec.payload["duration_s"].get<int64_t>() < 1) {
        errors.push_back(path + ": kill_supervisor needs a positive duration_s");
      }
    }
    if (rec.kind == "fms_route_amendment" &&
        (!rec.payload.contains("flight") || !rec.payload["flight"].is_string())) {
      errors.push_back(path + ": fms_route_amendment needs a flight id");
    }
  }
}

}  // namespace

ParseOutcome parse_scenario(std::string_view text) {
  ParseOutcome out;
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    out.errors.push_back("document: not valid JSON");
    return out;
  }
  ErrList& errors = out.errors;
  if (!expect_object(doc, "document", errors)) return out;

  ScenarioFile s;
  s.version = get_int(doc, "document", "version", 1, errors);
  s.name = get_str(doc, "document", "name", "", errors);
  s.duration_hr = get_num(doc, "document", "duration_hr", 1.0, errors);
  s.strict_mode = get_bool(doc, "document", "strict_mode", false, errors);

  if (doc.contains("airspace") && expect_object(doc["airspace"], "airspace", errors)) {
    const Json& a = doc["airspace"];
    s.airspace.radius_nm = get_num(a, "airspace", "radius_nm", 40.0, errors);
    s.airspace.ceiling_ft = get_num(a, "airspace", "ceiling_ft", 18000.0, errors);
    s.airspace.queue_capacity =
        get_int(a, "airspace", "queue_capacity", 12, errors);
    s.airspace.entry_gates = get_int(a, "airspace", "entry_gates", 2, errors);
    s.airspace.separation_s = get_int(a, "airspace", "separation_s", 90, errors);
    s.airspace.allow_radius_override =
        get_bool(a, "airspace", "allow_radius_override", false, errors);
    if (a.contains("holding") &&
        expect_object(a["holding"], "airspace.holding", errors)) {
      const Json& h = a["holding"];
      s.airspace.holding.base_altitude_ft =
          get_num(h, "airspace.holding", "base_altitude_ft", 7000.0, errors);
      s.airspace.holding.band_width_ft =
          get_num(h, "airspace.holding", "band_width_ft", 1000.0, errors);
      s.airspace.holding.level_capacity =
          get_int(h, "airspace.holding", "level_capacity", 3, errors);
    }
    if (a.contains("runways")) {
      if (!a["runways"].is_array()) {
        errors.push_back("airspace.runways: expected an array");
      } else {
        for (size_t i = 0; i < a["runways"].size(); ++i) {
          std::string path = "airspace.runways[" + std::to_string(i) + "]";
          const Json& r = a["runways"][i];
          if (!expect_object(r, path, errors)) continue;
          RunwayConfig rc;
          rc.id = get_str(r, path, "id", "", errors);
          std::string mode = get_str(r, path, "mode", "landing", errors);
          if (mode == "landing") {
            rc.mode = RunwayMode::Landing;
          } else if (mode == "takeoff") {
            rc.mode = RunwayMode::Takeoff;
          } else {
            errors.push_back(path + ".mode: expected landing or takeoff");
          }
          if (r.contains("crosses")) {
            if (!r["crosses"].is_array()) {
              errors.push_back(path + ".crosses: expected an array");
            } else {
              for (const auto& x : r["crosses"]) {
                if (x.is_string()) {
                  rc.crosses.push_back(x.get<std::string>());
                } else {
                  errors.push_back(path + ".crosses: entries must be strings");
                }
              }
            }
          }
          s.airspace.runways.push_back(std::move(rc));
        }
      }
    }
  }

  if (doc.contains("traffic") && expect_object(doc["traffic"], "traffic", errors)) {
    const Json& tr = doc["traffic"];
    s.traffic.arrival_rate_per_hr =
        get_num(tr, "traffic", "arrival_rate_per_hr", 17.0, errors);
    s.traffic.departure_rate_per_hr =
        get_num(tr, "traffic", "departure_rate_per_hr", 21.0, errors);
    s.traffic.jitter_frac = get_num(tr, "traffic", "jitter_frac", 0.10, errors);
    if (tr.contains("phase_durations_s") &&
        expect_object(tr["phase_durations_s"], "traffic.phase_durations_s",
                      errors)) {
      const Json& pd = tr["phase_durations_s"];
      const std::string path = "traffic.phase_durations_s";
      PhaseDurations& d = s.traffic.durations;
      d.at_entry_gate_s = get_int(pd, path.c_str(), "at_entry_gate", 60, errors);
      d.on_path_s = get_int(pd, path.c_str(), "on_path", 300, errors);
      d.to_metering_fix_s =
          get_int(pd, path.c_str(), "to_metering_fix", 120, errors);
      d.at_metering_fix_s =
          get_int(pd, path.c_str(), "at_metering_fix", 60, errors);
      d.final_descent_s = get_int(pd, path.c_str(), "final_descent", 180, errors);
      d.on_runway_s = get_int(pd, path.c_str(), "on_runway", 60, errors);
      d.backtrack_s = get_int(pd, path.c_str(), "backtrack", 90, errors);
      d.holding_lap_s = get_int(pd, path.c_str(), "holding_lap", 240, errors);
    }
  }

  if (doc.contains("causes") && expect_object(doc["causes"], "causes", errors)) {
    const Json& c = doc["causes"];
    s.causes.weather_deviation =
        get_num(c, "causes", "weather_deviation", 0.004, errors);
    s.causes.medical_priority =
        get_num(c, "causes", "medical_priority", 0.001, errors);
    s.causes.fuel_critical = get_num(c, "causes", "fuel_critical", 0.001, errors);
    s.causes.equipment_fault =
        get_num(c, "causes", "equipment_fault", 0.002, errors);
    s.causes.runway_blockage =
        get_num(c, "causes", "runway_blockage", 0.0005, errors);
  }

  if (doc.contains("network") && expect_object(doc["network"], "network", errors)) {
    const Json& n = doc["network"];
    if (n.contains("air") && expect_object(n["air"], "network.air", errors)) {
      s.network.air = parse_link(n["air"], "network.air", errors);
    }
    if (n.contains("ground") &&
        expect_object(n["ground"], "network.ground", errors)) {
      s.network.ground = parse_link(n["ground"], "network.ground", errors);
    }
  }

  if (doc.contains("timeouts") &&
      expect_object(doc["timeouts"], "timeouts", errors)) {
    const Json& to = doc["timeouts"];
    s.timeouts.heartbeat_s = get_int(to, "timeouts", "heartbeat_s", 5, errors);
    s.timeouts.failover_timeout_s =
        get_int(to, "timeouts", "failover_timeout_s", 30, errors);
    s.timeouts.escalation_deadline_s =
        get_int(to, "timeouts", "escalation_deadline_s", 120, errors);
  }

  if (doc.contains("ops") && expect_object(doc["ops"], "ops", errors)) {
    const Json& op = doc["ops"];
    s.ops.pipeline_cap = get_int(op, "ops", "pipeline_cap", 3, errors);
    s.ops.alternate_corridors =
        get_int(op, "ops", "alternate_corridors", 1, errors);
    s.ops.climbout_s = get_int(op, "ops", "climbout_s", 300, errors);
    s.ops.blockage_s = get_int(op, "ops", "blockage_s", 300, errors);
    s.ops.initial_fuel_min =
        get_num(op, "ops", "initial_fuel_min", 180.0, errors);
    s.ops.starvation_bound_min =
        get_int(op, "ops", "starvation_bound_min", 90, errors);
  }

  if (doc.contains("scripted_events")) {
    if (!doc["scripted_events"].is_array()) {
      errors.push_back("scripted_events: expected an array");
    } else {
      for (size_t i = 0; i < doc["scripted_events"].size(); ++i) {
        const Json& rec = doc["scripted_events"][i];
        std::string path = "scripted_events[" + std::to_string(i) + "]";
        if (!expect_object(rec, path, errors)) continue;
        ScriptedRecord r;
        r.time = get_int(rec, path.c_str(), "time", 0, errors);
        r.kind = get_str(rec, path.c_str(), "kind", "", errors);
        r.payload = rec.value("payload", Json::object());
        s.scripted_events.push_back(std::move(r));
      }
    }
  }

  validate_semantics(s, errors);
  if (errors.empty()) out.scenario = std::move(s);
  return out;
}

std::string serialize_scenario(const ScenarioFile& s) {
  Json doc;
  doc["version"] = s.version;
  doc["name"] = s.name;
  doc["duration_hr"] = s.duration_hr;
  doc["strict_mode"] = s.strict_mode;

  Json a;
  a["radius_nm"] = s.airspace.radius_nm;
  a["ceiling_ft"] = s.airspace.ceiling_ft;
  a["queue_capacity"] = s.airspace.queue_capacity;
  a["entry_gates"] = s.airspace.entry_gates;
  a["separation_s"] = s.airspace.separation_s;
  a["allow_radius_override"] = s.airspace.allow_radius_override;
  a["holding"] = Json{{"base_altitude_ft", s.airspace.holding.base_altitude_ft},
                      {"band_width_ft", s.airspace.holding.band_width_ft},
                      {"level_capacity", s.airspace.holding.level_capacity}};
  Json runways = Json::array();
  for (const auto& r : s.airspace.runways) {
    Json rj;
    rj["id"] = r.id;
    rj["mode"] = to_string(r.mode);
    rj["crosses"] = r.crosses;
    runways.push_back(std::move(rj));
  }
  a["runways"] = std::move(runways);
  doc["airspace"] = std::move(a);

  Json tr;
  tr["arrival_rate_per_hr"] = s.traffic.arrival_rate_per_hr;
  tr["departure_rate_per_hr"] = s.traffic.departure_rate_per_hr;
  tr["jitter_frac"] = s.traffic.jitter_frac;
  const PhaseDurations& d = s.traffic.durations;
  tr["phase_durations_s"] = Json{
      {"at_entry_gate", d.at_entry_gate_s},
      {"on_path", d.on_path_s},
      {"to_metering_fix", d.to_metering_fix_s},
      {"at_metering_fix", d.at_metering_fix_s},
      {"final_descent", d.final_descent_s},
      {"on_runway", d.on_runway_s},
      {"backtrack", d.backtrack_s},
      {"holding_lap", d.holding_lap_s}};
  doc["traffic"] = std::move(tr);

  doc["causes"] = Json{{"weather_deviation", s.causes.weather_deviation},
                       {"medical_priority", s.causes.medical_priority},
                       {"fuel_critical", s.causes.fuel_critical},
                       {"equipment_fault", s.causes.equipment_fault},
                       {"runway_blockage", s.causes.runway_blockage}};

  auto link_json = [](const LinkParams& l) {
    return Json{{"latency_s", Json::array({l.latency_lo_s, l.latency_hi_s})},
                {"loss_prob", l.loss_prob}};
  };
  doc["network"] =
      Json{{"air", link_json(s.network.air)}, {"ground", link_json(s.network.ground)}};

  doc["timeouts"] = Json{{"heartbeat_s", s.timeouts.heartbeat_s},
                         {"failover_timeout_s", s.timeouts.failover_timeout_s},
                         {"escalation_deadline_s", s.timeouts.escalation_deadline_s}};

  doc["ops"] = Json{{"pipeline_cap", s.ops.pipeline_cap},
                    {"alternate_corridors", s.ops.alternate_corridors},
                    {"climbout_s", s.ops.climbout_s},
                    {"blockage_s", s.ops.blockage_s},
                    {"initial_fuel_min", s.ops.initial_fuel_min},
                    {"starvation_bound_min", s.ops.starvation_bound_min}};

  Json scripted = Json::array();
  for (const auto& rec : s.scripted_events) {
    scripted.push_back(
        Json{{"time", rec.time}, {"kind", rec.kind}, {"payload", rec.payload}});
  }
  doc["scripted_events"] = std::move(scripted);

  return doc.dump(2) + "\n";
}

std::string scenario_hash(const ScenarioFile& s) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(serialize_scenario(s))));
  return buf;
}

namespace {

constexpr const char* kMumbaiScenario = R"json({
  "version": 1,
  "name": "mumbai",
  "duration_hr": 4.0,
  "strict_mode": true,
  "airspace": {
    "radius_nm": 40.0,
    "ceiling_ft": 18000.0,
    "queue_capacity": 12,
    "entry_gates": 2,
    "separation_s": 90,
    "allow_radius_override": false,
    "holding": {
      "base_altitude_ft": 7000.0,
      "band_width_ft": 1000.0,
      "level_capacity": 3
    },
    "runways": [
      {"id": "RW27", "mode": "landing", "crosses": ["RW14"]},
      {"id": "RW14", "mode": "takeoff", "crosses": ["RW27"]}
    ]
  },
  "traffic": {
    "arrival_rate_per_hr": 17.0,
    "departure_rate_per_hr": 21.0,
    "jitter_frac": 0.1,
    "phase_durations_s": {
      "at_entry_gate": 60,
      "on_path": 300,
      "to_metering_fix": 120,
      "at_metering_fix": 60,
      "final_descent": 180,
      "on_runway": 50,
      "backtrack": 60,
      "holding_lap": 240
    }
  },
  "causes": {
    "weather_deviation": 0.004,
    "medical_priority": 0.001,
    "fuel_critical": 0.001,
    "equipment_fault": 0.002,
    "runway_blockage": 0.0005
  },
  "network": {
    "air": {"latency_s": [1, 1], "loss_prob": 0.0},
    "ground": {"latency_s": [1, 1], "loss_prob": 0.0}
  },
  "timeouts": {
    "heartbeat_s": 5,
    "failover_timeout_s": 30,
    "escalation_deadline_s": 120
  },
  "ops": {
    "pipeline_cap": 3,
    "alternate_corridors": 1,
    "climbout_s": 300,
    "blockage_s": 300,
    "initial_fuel_min": 180.0,
    "starvation_bound_min": 90
  },
  "scripted_events": []
})json";

constexpr const char* kLossyScenario = R"json({
  "version": 1,
  "name": "mumbai-lossy",
  "duration_hr": 1.0,
  "strict_mode": true,
  "airspace": {
    "radius_nm": 40.0,
    "ceiling_ft": 18000.0,
    "queue_capacity": 12,
    "entry_gates": 2,
    "separation_s": 90,
    "allow_radius_override": false,
    "holding": {
      "base_altitude_ft": 7000.0,
      "band_width_ft": 1000.0,
      "level_capacity": 3
    },
    "runways": [
      {"id": "RW27", "mode": "landing", "crosses": ["RW14"]},
      {"id": "RW14", "mode": "takeoff", "crosses": ["RW27"]}
    ]
  },
  "traffic": {
    "arrival_rate_per_hr": 14.0,
    "departure_rate_per_hr": 16.0,
    "jitter_frac": 0.1,
    "phase_durations_s": {
      "at_entry_gate": 60,
      "on_path": 300,
      "to_metering_fix": 120,
      "at_metering_fix": 60,
      "final_descent": 180,
      "on_runway": 50,
      "backtrack": 60,
      "holding_lap": 240
    }
  },
  "causes": {
    "weather_deviation": 0.004,
    "medical_priority": 0.001,
    "fuel_critical": 0.001,
    "equipment_fault": 0.002,
    "runway_blockage": 0.0005
  },
  "network": {
    "air": {"latency_s": [1, 3], "loss_prob": 0.05},
    "ground": {"latency_s": [1, 2], "loss_prob": 0.02}
  },
  "timeouts": {
    "heartbeat_s": 5,
    "failover_timeout_s": 30,
    "escalation_deadline_s": 120
  },
  "ops": {
    "pipeline_cap": 3,
    "alternate_corridors": 1,
    "climbout_s": 300,
    "blockage_s": 300,
    "initial_fuel_min": 180.0,
    "starvation_bound_min": 90
  },
  "scripted_events": []
})json";

constexpr const char* kSurgeScenario = R"json({
  "version": 1,
  "name": "mumbai-surge",
  "duration_hr": 1.0,
  "strict_mode": true,
  "airspace": {
    "radius_nm": 40.0,
    "ceiling_ft": 18000.0,
    "queue_capacity": 12,
    "entry_gates": 2,
    "separation_s": 90,
    "allow_radius_override": false,
    "holding": {
      "base_altitude_ft": 7000.0,
      "band_width_ft": 1000.0,
      "level_capacity": 3
    },
    "runways": [
      {"id": "RW27", "mode": "landing", "crosses": ["RW14"]},
      {"id": "RW14", "mode": "takeoff", "crosses": ["RW27"]}
    ]
  },
  "traffic": {
    "arrival_rate_per_hr": 22.0,
    "departure_rate_per_hr": 24.0,
    "jitter_frac": 0.1,
    "phase_durations_s": {
      "at_entry_gate": 60,
      "on_path": 300,
      "to_metering_fix": 120,
      "at_metering_fix": 60,
      "final_descent": 180,
      "on_runway": 50,
      "backtrack": 60,
      "holding_lap": 240
    }
  },
  "causes": {
    "weather_deviation": 0.008,
    "medical_priority": 0.002,
    "fuel_critical": 0.002,
    "equipment_fault": 0.004,
    "runway_blockage": 0.001
  },
  "network": {
    "air": {"latency_s": [1, 1], "loss_prob": 0.0},
    "ground": {"latency_s": [1, 1], "loss_prob": 0.0}
  },
  "timeouts": {
    "heartbeat_s": 5,
    "failover_timeout_s": 30,
    "escalation_deadline_s": 120
  },
  "ops": {
    "pipeline_cap": 3,
    "alternate_corridors": 1,
    "climbout_s": 300,
    "blockage_s": 300,
    "initial_fuel_min": 180.0,
    "starvation_bound_min": 90
  },
  "scripted_events": []
})json";

}  // namespace

const char* builtin_scenario(std::string_view name) {
  if (name == "mumbai") return kMumbaiScenario;
  if (name == "mumbai-lossy") return kLossyScenario;
  if (name == "mumbai-surge") return kSurgeScenario;
  return nullptr;
}

std::vector<std::string> builtin_scenario_names() {
  return {"mumbai", "mumbai-lossy", "mumbai-surge"};
}

std::string load_scenario_text(const std::string& ref) {
  if (ref.rfind("builtin:", 0) == 0) {
    const char* text = builtin_scenario(ref.substr(8));
    if (!text) {
      throw SimError(Err::NotFound, "no builtin scenario named " + ref.substr(8));
    }
    return text;
  }
  std::ifstream in(ref);
  if (!in) {
    throw SimError(Err::NotFound, "cannot read scenario file " + ref);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace atcsim
