#pragma once

#include <string>
#include <vector>

namespace atcsim {

enum class RunwayMode { Landing, Takeoff };

const char* to_string(RunwayMode m);

struct RunwayConfig {
  std::string id;
  RunwayMode mode = RunwayMode::Landing;
  // Runways whose surface intersects this one. Occupancy of any runway in
  // the set blocks a grant on this one for the overlap window.
  std::vector<std::string> crosses;
};

struct HoldingBands {
  double base_altitude_ft = 7000.0;
  double band_width_ft = 1000.0;
  int level_capacity = 3;
};

// Static description of one terminal airspace.
struct AirspaceConfig {
  double radius_nm = 40.0;
  double ceiling_ft = 18000.0;
  int queue_capacity = 12;
  int entry_gates = 2;
  int separation_s = 90;  // minimum start-to-start spacing per runway
  bool allow_radius_override = false;
  HoldingBands holding;
  std::vector<RunwayConfig> runways;

  const RunwayConfig* runway(const std::string& id) const;

  // Returns every problem found, not just the first; an empty vector means
  // the configuration is usable.
  std::vector<std::string> validate() const;
};

}  // namespace atcsim
