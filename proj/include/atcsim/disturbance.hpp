#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "atcsim/phases.hpp"
#include "atcsim/queue.hpp"
#include "atcsim/rng.hpp"
#include "atcsim/stack.hpp"

namespace atcsim {

struct AircraftAgent;

enum class DisturbanceCause {
  WeatherDeviation,
  MedicalPriority,
  FuelCritical,
  EquipmentFault,
  RunwayBlockage,
};

inline constexpr DisturbanceCause kAllCauses[] = {
    DisturbanceCause::WeatherDeviation, DisturbanceCause::MedicalPriority,
    DisturbanceCause::FuelCritical,     DisturbanceCause::EquipmentFault,
    DisturbanceCause::RunwayBlockage,
};

const char* to_string(DisturbanceCause c);
std::optional<DisturbanceCause> cause_from_string(std::string_view s);

enum class ResolutionPolicy { ReSequence, ReRoute, GroundDelay };

const char* to_string(ResolutionPolicy p);

// Policy applied per cause. Fixed mapping; printable via the CLI for audit.
ResolutionPolicy policy_for(DisturbanceCause c);

// Phases in which a cause can strike. Sampling skips ineligible
// (aircraft, cause) pairs entirely.
const std::vector<FlightPhase>& eligible_phases(DisturbanceCause c);

// Per-cause Bernoulli probability per eligible aircraft-minute.
struct CauseModel {
  double weather_deviation = 0.004;
  double medical_priority = 0.001;
  double fuel_critical = 0.001;
  double equipment_fault = 0.002;
  double runway_blockage = 0.0005;

  double probability(DisturbanceCause c) const;
  std::vector<std::string> validate() const;
};

enum class DisturbanceOutcome { Pending, Resolved, Escalated };

struct DisturbanceEvent {
  std::string event_id;
  DisturbanceCause cause = DisturbanceCause::WeatherDeviation;
  std::string flight;        // aircraft the event rides on
  std::string target;        // equals flight, or a runway id for blockages
  int64_t raised_at = 0;
  DisturbanceOutcome outcome = DisturbanceOutcome::Pending;
  bool report_sent = false;
  int64_t action_sent_at = -1;  // last time a resolution op was emitted
};

// One sampling sweep, run on minute boundaries: an independent draw per
// eligible (aircraft, cause) pair. Agents are visited in the order given;
// the caller passes them sorted by id so the draw sequence is reproducible.
struct SampledDisturbance {
  std::string flight;
  DisturbanceCause cause;
};
std::vector<SampledDisturbance> sample_disturbances(
    const std::vector<std::pair<std::string, FlightPhase>>& eligible_agents,
    const CauseModel& model, RngStream& rng);

// What resolving one event does to the world, decided deterministically from
// the event and the state snapshot. The engine validates and applies it.
struct ResolutionPlan {
  ResolutionPolicy policy = ResolutionPolicy::ReSequence;
  // False when no applicable action exists right now. Structural misses
  // (nothing to resequence) escalate immediately; transient misses (no free
  // corridor) wait for one until the escalation deadline lapses.
  bool applicable = false;
  bool structural_miss = false;
  bool promote_to_head = false;   // ReSequence
  bool restart_on_path = false;   // ReRoute: rerun the OnPath leg
  std::string block_runway;       // GroundDelay: runway taken out of service
};

ResolutionPlan resolve(const DisturbanceEvent& event, const AircraftAgent& agent,
                       const LandingQueue& queue, const HoldingStack& stack,
                       int corridors_free);

struct HandledFractions {
  double handled_fraction = 1.0;      // denominator: disturbed flights only
  double handled_fraction_all = 1.0;  // denominator: all flights
  int disturbed_flights = 0;
  int escalated_flights = 0;
  int total_flights = 0;
};

// Fraction of flights whose every disturbance resolved without human
// intervention. Vacuously 1.0 when no flight was disturbed.
HandledFractions handled_fractions(
    const std::map<std::string, std::vector<DisturbanceOutcome>>& by_flight,
    int total_flights);

}  // namespace atcsim
