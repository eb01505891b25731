#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "atcsim/aircraft.hpp"
#include "atcsim/messaging.hpp"
#include "atcsim/queue.hpp"
#include "atcsim/stack.hpp"

namespace atcsim {

// Reserved ground-station ids. Everything else in the directory is an
// aircraft.
inline constexpr const char* kAtcId = "ATC";
inline constexpr const char* kTraconId = "TRACON";
inline constexpr const char* kInterfacingId = "INPROC";

// Recipient placeholders resolved by the engine at send time.
inline constexpr const char* kToSequencer = "@queue";
inline constexpr const char* kToAllAircraft = "@aircraft";
inline constexpr const char* kToLeaders = "@leaders";
inline constexpr const char* kToSupervisor = "@supervisor";

// ---------------------------------------------------------------------------
// Directory facilitator

struct Coordinates {
  double range_nm = 0.0;
  double bearing_deg = 0.0;
  double altitude_ft = 0.0;
};

struct DfEntry {
  Coordinates coords;
  std::string state;
  FlightPhase phase = FlightPhase::ArrivalIntoAirspace;
  int64_t last_update = 0;
};

// Live index of every aircraft in the airspace, keyed by id. Mirrors the
// engine agent table exactly: registered at spawn, deregistered at exit.
struct DfRegistry {
  std::map<std::string, DfEntry> entries;

  bool contains(const std::string& id) const { return entries.count(id) > 0; }
  size_t size() const { return entries.size(); }
};

// Registering an existing id refreshes its entry in place.
void df_register(DfRegistry& reg, const std::string& id,
                 const Coordinates& coords, const std::string& state,
                 FlightPhase phase, int64_t t);

// Throws NotFound for an unknown id.
void df_deregister(DfRegistry& reg, const std::string& id);

// ---------------------------------------------------------------------------
// Supervisors

enum class SupervisorRole { Atc, Tracon };

const char* to_string(SupervisorRole r);

struct EscalationTicket {
  std::string event_id;
  std::string flight;
  std::string policy;
  int64_t seen_at = 0;
};

// State of one supervising controller. Both supervisors passively overhear
// every message on the bus (lossless, zero latency) and keep a warm mirror of
// the landing queue, so failover needs no state transfer.
struct SupervisorState {
  SupervisorRole role = SupervisorRole::Atc;
  bool alive = true;
  LandingQueue mirrored_queue;
  std::vector<std::pair<int64_t, std::string>> overheard_log;
  std::map<std::string, EscalationTicket> pending_escalations;
  std::set<std::string> answered_escalations;
  int64_t last_heartbeat_seen = 0;  // meaningful on the TRACON side
};

// Feeds one overheard copy to a supervisor: appends to the overheard log,
// replays accepted queue mutations into the mirror (adopting the full state
// on a version gap), and tracks escalations awaiting an answer.
void atc_overhear(SupervisorState& sup, const Delivery& tap);

struct FailoverDecision {
  bool failover = false;
  bool failback = false;
};

// Supervision hand-off driven purely by the heartbeat gap observed on the
// TRACON side. Returns what changed; `active` is updated in place.
FailoverDecision tracon_failover(SupervisorState& tracon, SupervisorRole& active,
                                 int64_t t, int failover_timeout_s);

// Arrival announcement from approach control to the active supervisor.
Envelope tracon_entry_notify(const std::string& flight, int64_t t,
                             const std::string& active_supervisor);

// ---------------------------------------------------------------------------
// Holding-level leaders

struct LeaderSystem {
  std::vector<std::string> members;
};

// Level leaders plus climbing departures: the set that takeoff information
// is broadcast to.
LeaderSystem current_leader_system(
    const HoldingStack& stack,
    const std::map<std::string, AircraftAgent>& agents);

// Fan-out performed by a level leader on receiving an original broadcast:
// one relayed copy per non-leader member of its level. Throws NotALeader if
// the given aircraft leads no level.
std::vector<Envelope> leader_relay(const std::string& leader,
                                   const HoldingStack& stack,
                                   const Envelope& origin, int64_t t);

// ---------------------------------------------------------------------------
// Aircraft behaviour

// Immutable view of the world shared by every aircraft evaluated in one
// step. Per-aircraft knowledge (the queue replica) lives on the agent.
struct WorldView {
  int64_t t = 0;
  const HoldingStack* stack = nullptr;
  int corridors_free = 0;
  std::string active_supervisor;
  int escalation_deadline_s = 120;
  int holding_lap_s = 240;
};

// Outcome of one aircraft decision step: the updated agent state, drafted
// messages (the engine assigns ids and delivers), and requested mutations
// the engine validates at commit time.
struct StepEffects {
  AircraftAgent updated;
  std::vector<Envelope> messages;
  std::optional<FlightPhase> transition;
  bool wants_reroute = false;
  bool forced_reroute = false;  // directive-driven: bypass the corridor pool
  bool wants_ground_delay = false;
  bool escalated = false;
};

// Pure decision function: (state, inbox, world view) -> (state', effects).
// Never mutates shared state; everything it wants done travels back in the
// effects for the engine to validate and apply.
StepEffects aircraft_step(const AircraftAgent& self,
                          const std::vector<Delivery>& inbox,
                          const WorldView& view);

// ---------------------------------------------------------------------------
// Interfacing agent (flight systems on the ground side)

struct ScriptedRecord {
  int64_t time = 0;
  std::string kind;
  Json payload = Json::object();  // never null: consumers probe with value()
};

struct ScanResult {
  std::vector<std::string> registered;
  std::vector<std::string> deregistered;
  std::vector<Envelope> external_inputs;
};

// Position synthesized for the directory from phase progress.
Coordinates synth_coordinates(const AircraftAgent& agent, double radius_nm,
                              double holding_base_ft, double holding_band_ft,
                              int64_t t);

// One interfacing-agent sweep: reconciles the directory against the live
// agent table (register new, refresh known, deregister gone) and converts
// external records due at t into ExternalInput messages. Unknown record
// kinds throw MalformedExternalRecord.
ScanResult inprocess_scan(const std::map<std::string, AircraftAgent>& agents,
                          DfRegistry& reg,
                          const std::vector<ScriptedRecord>& due, double radius_nm,
                          double holding_base_ft, double holding_band_ft,
                          int64_t t);

}  // namespace atcsim
