#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "atcsim/disturbance.hpp"
#include "atcsim/phases.hpp"
#include "atcsim/queue.hpp"

namespace atcsim {

enum class AircraftKind { Arrival, Departure };

const char* to_string(AircraftKind k);

// Per-aircraft agent state. Decision logic lives in aircraft_step (a pure
// function over this state plus the delivered inbox); the engine owns the
// authoritative copy and applies requested mutations at commit time.
struct AircraftAgent {
  std::string id;
  AircraftKind kind = AircraftKind::Arrival;
  FlightPhase phase = FlightPhase::ArrivalIntoAirspace;
  int64_t entered_at = 0;

  // Replica of the shared landing queue, updated from sync broadcasts.
  LandingQueue local_queue;
  std::optional<int> queue_index;

  std::optional<int> holding_level;
  bool is_leader = false;
  double altitude_ft = 0.0;

  double fuel_remaining_min = 180.0;
  std::optional<DisturbanceEvent> pending_disturbance;

  // Phase timing. deadline is when the current phase's nominal duration
  // (with jitter) elapses; 0 means the phase has no timer.
  int64_t phase_entered_at = 0;
  int64_t phase_deadline = 0;

  // Protocol progress flags.
  bool admit_requested = false;
  bool admitted = false;
  bool leave_queue_sent = false;
  bool divert_requested = false;
  bool gate_clearance = false;
  bool path_clearance = false;
  bool runway_clearance = false;
  bool takeoff_info_sent = false;
  int64_t admit_requested_at = -1;
  int64_t leave_queue_sent_at = -1;

  int64_t next_heartbeat_at = -1;
  int64_t runway_requested_at = -1;

  // Index of the alternate corridor occupied while rerouting, -1 otherwise.
  int corridor = -1;
  int entry_gate = 0;

  // Rollout durations drawn when the runway is granted, so the occupancy
  // window and the later phase timers agree exactly.
  int64_t granted_onrunway_s = 0;
  int64_t granted_backtrack_s = 0;

  bool alive = true;
};

}  // namespace atcsim
