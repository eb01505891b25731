#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "atcsim/agents.hpp"
#include "atcsim/aircraft.hpp"
#include "atcsim/event_log.hpp"
#include "atcsim/messaging.hpp"
#include "atcsim/queue.hpp"
#include "atcsim/rng.hpp"
#include "atcsim/scenario.hpp"
#include "atcsim/stack.hpp"

namespace atcsim {

// Live occupancy of one runway. Intervals are half-open [from, until).
struct RunwayOcc {
  std::string occupant;
  int64_t occupied_from = -1;
  int64_t occupied_until = -1;
  int64_t last_grant_start = -1000000000;
  int64_t blocked_until = -1;
};

enum class ClaimResult { Granted, Queued };

// Grants the runway for [t, t + duration_s) iff it is not blocked, it and
// every crossing runway are unoccupied for the window, and the start-to-start
// separation on this runway is respected. Queued otherwise; the caller
// retries on later steps. Throws NotFound for an unknown runway.
ClaimResult claim_runway(std::map<std::string, RunwayOcc>& occupancy,
                         const AirspaceConfig& cfg, const std::string& runway_id,
                         const std::string& aircraft, int64_t t,
                         int64_t duration_s);

struct PendingDeparture {
  std::string id;
  int64_t ready_at = 0;
  // Rollout duration drawn once when the departure becomes ready, so a long
  // wait at the hold point cannot change the occupancy window it gets.
  int64_t duration_s = 60;
};

// Everything the simulation is, at one instant. Owned by the Engine; exposed
// read-mostly for tests and post-run checks.
struct EngineState {
  int64_t clock_s = 0;
  std::map<std::string, AircraftAgent> agents;
  LandingQueue queue;  // authoritative copy
  HoldingStack stack;
  DfRegistry registry;
  SupervisorState atc;
  SupervisorState tracon;
  SupervisorRole active = SupervisorRole::Atc;
  MessageBus bus;
  std::map<std::string, RunwayOcc> runways;
  std::vector<int64_t> corridor_busy_until;
  std::deque<PendingDeparture> pending_departures;
  int64_t departures_hold_until = -1;

  // Conservation and reporting counters.
  int64_t arrivals_entered = 0;
  int64_t landings = 0;
  int64_t takeoffs = 0;
  int64_t diversions = 0;
  int64_t departures_ready = 0;
  int64_t arrival_exits = 0;
  int64_t departure_exits = 0;
  int64_t escalation_count = 0;
  int64_t supervision_gap_count = 0;
  int64_t fault_count = 0;
};

// Fixed-step simulation driver. One step is one simulated second; the update
// order within a step is fixed and documented in step(), which together with
// the named RNG streams makes runs bit-reproducible per (scenario, seed).
class Engine {
 public:
  Engine(ScenarioFile scenario, uint64_t seed);

  void step();
  void run();

  const EngineState& state() const { return st_; }
  EngineState& mutable_state() { return st_; }
  const EventLog& log() const { return log_; }
  const ScenarioFile& scenario() const { return sc_; }
  uint64_t seed() const { return seed_; }
  int64_t horizon_s() const {
    return static_cast<int64_t>(sc_.duration_hr * 3600.0);
  }

 private:
  void apply_scripted(int64_t t);
  void generate_traffic(int64_t t);
  void sample_minute_disturbances(int64_t t);
  void fuel_tick(int64_t t);
  void route_deliveries(int64_t t);
  void evaluate_aircraft(int64_t t);
  void commit(int64_t t);
  void issue_clearances(int64_t t);
  void supervisor_phase(int64_t t);
  void check_invariants(int64_t t);

  void spawn_arrival(int64_t t);
  void queue_departure(int64_t t);
  void grant_takeoffs(int64_t t);
  void remove_finished(int64_t t);
  void enter_phase(AircraftAgent& a, FlightPhase to, int64_t t);
  int64_t jittered(int nominal_s);
  int64_t phase_duration(const AircraftAgent& a, FlightPhase p);
  void send_draft(Envelope env, int64_t t);
  std::vector<std::string> resolve_recipients(const Envelope& env) const;
  void sync_stack_flags();
  void apply_queue_ops(int64_t t);
  void broadcast_queue_state(const std::string& requester, const std::string& op,
                             const std::string& target, int64_t t,
                             const std::string& event_id);
  int corridors_free(int64_t t) const;
  int pipeline_usage() const;
  void fault(int64_t t, const std::string& what, Json detail);
  const std::string& landing_runway() const { return landing_runway_; }

  ScenarioFile sc_;
  uint64_t seed_;
  EngineState st_;
  EventLog log_;

  RngStream rng_arrivals_;
  RngStream rng_departures_;
  RngStream rng_disturbance_;
  RngStream rng_network_;
  RngStream rng_jitter_;

  int64_t arrival_seq_ = 0;
  int64_t departure_seq_ = 0;
  int64_t disturbance_seq_ = 0;

  std::vector<ScriptedRecord> scripted_;  // sorted by (time, file order)
  size_t scripted_cursor_ = 0;
  std::vector<std::pair<int64_t, std::string>> revive_at_;  // (time, role id)

  std::string landing_runway_;
  std::string takeoff_runway_;

  // Interfacing-agent bookkeeping: when each clearance was last issued.
  std::map<std::string, int64_t> issued_gate_;
  std::map<std::string, int64_t> issued_path_;
  std::map<std::string, int64_t> issued_runway_;

  // Events already closed by a queue promotion; duplicate requests caused by
  // loss-driven retries are ignored rather than re-applied.
  std::set<std::string> resolved_events_;

  // Per-step scratch, rebuilt every step.
  std::map<std::string, std::vector<Delivery>> inboxes_;
  std::vector<Delivery> sequencer_ops_;
  std::map<std::string, StepEffects> effects_;
  std::vector<std::string> new_arrivals_;
  std::vector<ScriptedRecord> due_external_;
};

}  // namespace atcsim
