#include "atcsim/airspace.hpp"

#include <set>

namespace atcsim {

const char* to_string(RunwayMode m) {
  return m == RunwayMode::Landing ? "landing" : "takeoff";
}

const RunwayConfig* AirspaceConfig::runway(const std::string& id) const {
  for (const auto& r : runways) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::vector<std::string> AirspaceConfig::validate() const {
  std::vector<std::string> errors;
  if (!allow_radius_override && (radius_nm < 30.0 || radius_nm > 50.0)) {
    errors.push_back("airspace.radius_nm " + std::to_string(radius_nm) +
                     " outside [30, 50] without override flag");
  }
  if (radius_nm <= 0.0) {
    errors.push_back("airspace.radius_nm must be positive");
  }
  if (ceiling_ft <= holding.base_altitude_ft) {
    errors.push_back("airspace.ceiling_ft must exceed holding base altitude");
  }
  if (queue_capacity < 1) {
    errors.push_back("airspace.queue_capacity must be at least 1");
  }
  if (entry_gates < 1) {
    errors.push_back("airspace.entry_gates must be at least 1");
  }
  if (separation_s < 0) {
    errors.push_back("airspace.separation_s must be non-negative");
  }
  if (holding.band_width_ft <= 0.0) {
    errors.push_back("airspace.holding.band_width_ft must be positive");
  }
  if (holding.level_capacity < 1) {
    errors.push_back("airspace.holding.level_capacity must be at least 1");
  }
  if (runways.empty()) {
    errors.push_back("airspace.runways must not be empty");
  }
  std::set<std::string> ids;
  bool has_landing = false;
  for (const auto& r : runways) {
    if (r.id.empty()) errors.push_back("runway with empty id");
    if (!ids.insert(r.id).second) {
      errors.push_back("duplicate runway id " + r.id);
    }
    if (r.mode == RunwayMode::Landing) has_landing = true;
  }
  if (!runways.empty() && !has_landing) {
    errors.push_back("no landing runway configured");
  }
  for (const auto& r : runways) {
    for (const auto& x : r.crosses) {
      if (x == r.id) {
        errors.push_back("runway " + r.id + " crosses itself");
        continue;
      }
      const RunwayConfig* other = runway(x);
      if (!other) {
        errors.push_back("runway " + r.id + " crosses unknown runway " + x);
        continue;
      }
      bool symmetric = false;
      for (const auto& back : other->crosses) {
        if (back == r.id) symmetric = true;
      }
      if (!symmetric) {
        errors.push_back("crossing " + r.id + "/" + x + " is not symmetric");
      }
    }
  }
  return errors;
}

}  // namespace atcsim
