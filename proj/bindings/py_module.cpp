// Python bindings for the main operations: scenario handling, running a
// simulation, and the pure decision helpers that are useful standalone.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "atcsim/disturbance.hpp"
#include "atcsim/engine.hpp"
#include "atcsim/event_log.hpp"
#include "atcsim/metrics.hpp"
#include "atcsim/phases.hpp"
#include "atcsim/queue.hpp"
#include "atcsim/scenario.hpp"
#include "atcsim/stack.hpp"

namespace py = pybind11;
using namespace atcsim;

namespace {

ScenarioFile parse_or_throw(const std::string& text) {
  ParseOutcome out = parse_scenario(text);
  if (!out.ok()) {
    std::string msg = "invalid scenario:";
    for (const std::string& e : out.errors) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  return std::move(*out.scenario);
}

py::dict json_to_dict(const Json& j) {
  py::dict d;
  for (const auto& [key, value] : j.items()) {
    if (value.is_string()) {
      d[key.c_str()] = value.get<std::string>();
    } else if (value.is_boolean()) {
      d[key.c_str()] = value.get<bool>();
    } else if (value.is_number_integer()) {
      d[key.c_str()] = value.get<int64_t>();
    } else if (value.is_number()) {
      d[key.c_str()] = value.get<double>();
    } else {
      d[key.c_str()] = value.dump();
    }
  }
  return d;
}

py::dict run_simulation(const std::string& scenario_text, uint64_t seed) {
  ScenarioFile sc = parse_or_throw(scenario_text);
  Engine engine(sc, seed);
  engine.run();
  RunMetrics m = compute_metrics(engine.log().events());
  py::dict out;
  out["metrics"] = json_to_dict(metrics_json(m));
  out["log"] = engine.log().text();
  return out;
}

py::list validate_scenario(const std::string& text) {
  ParseOutcome out = parse_scenario(text);
  py::list errors;
  for (const std::string& e : out.errors) errors.append(e);
  return errors;
}

std::string scenario_hash_of(const std::string& text) {
  return scenario_hash(parse_or_throw(text));
}

FlightPhase phase_or_throw(const std::string& name) {
  auto p = phase_from_string(name);
  if (!p) throw std::invalid_argument("unknown phase: " + name);
  return *p;
}

py::list group_levels_py(
    const std::vector<std::pair<std::string, double>>& reports,
    const std::vector<std::string>& landing_order, double base_altitude_ft,
    double band_width_ft, double ceiling_ft) {
  LandingQueue order;
  order.entries = landing_order;
  std::vector<HoldingAltitude> alts;
  alts.reserve(reports.size());
  for (const auto& [id, ft] : reports) alts.push_back({id, ft});
  HoldingStack stack =
      group_levels(alts, order, base_altitude_ft, band_width_ft, ceiling_ft);
  py::list levels;
  for (const HoldingLevel& lvl : stack.levels) {
    py::dict d;
    d["members"] = lvl.members;
    d["leader"] = lvl.leader;
    levels.append(d);
  }
  return levels;
}

std::string policy_for_py(const std::string& cause) {
  for (DisturbanceCause c : kAllCauses) {
    if (cause == to_string(c)) return to_string(policy_for(c));
  }
  throw std::invalid_argument("unknown cause: " + cause);
}

}  // namespace

PYBIND11_MODULE(_atcsim, m) {
  m.doc() = "terminal-area multi-agent traffic simulator";

  m.def("builtin_scenario_names", &builtin_scenario_names,
        "names of the scenarios bundled into the library");
  m.def("load_scenario", &load_scenario_text, py::arg("ref"),
        "read a scenario text from builtin:<name> or a file path");
  m.def("validate_scenario", &validate_scenario, py::arg("text"),
        "every problem in the scenario text; empty means valid");
  m.def("scenario_hash", &scenario_hash_of, py::arg("text"),
        "canonical configuration hash of a valid scenario text");
  m.def("run", &run_simulation, py::arg("scenario_text"), py::arg("seed"),
        "simulate one (scenario, seed); returns {'metrics': dict, 'log': str}");
  m.def(
      "legal_transition_count",
      []() { return legal_transitions().size(); },
      "size of the permitted phase-transition set");
  m.def(
      "transition_allowed",
      [](const std::string& from, const std::string& to) {
        return transition_allowed(phase_or_throw(from), phase_or_throw(to));
      },
      py::arg("from_phase"), py::arg("to_phase"),
      "whether aircraft may move between the two named phases");
  m.def("group_levels", &group_levels_py, py::arg("reports"),
        py::arg("landing_order"), py::arg("base_altitude_ft") = 7000.0,
        py::arg("band_width_ft") = 1000.0, py::arg("ceiling_ft") = 18000.0,
        "bucket (id, altitude_ft) reports into holding levels with leaders");
  m.def("policy_for", &policy_for_py, py::arg("cause"),
        "resolution policy name for a disturbance cause name");
}
