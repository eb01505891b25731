#include "atcsim/disturbance.hpp"

#include "atcsim/aircraft.hpp"

namespace atcsim {

const char* to_string(DisturbanceCause c) {
  switch (c) {
    case DisturbanceCause::WeatherDeviation: return "WeatherDeviation";
    case DisturbanceCause::MedicalPriority: return "MedicalPriority";
    case DisturbanceCause::FuelCritical: return "FuelCritical";
    case DisturbanceCause::EquipmentFault: return "EquipmentFault";
    case DisturbanceCause::RunwayBlockage: return "RunwayBlockage";
  }
  return "?";
}

std::optional<DisturbanceCause> cause_from_string(std::string_view s) {
  for (DisturbanceCause c : kAllCauses) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

const char* to_string(ResolutionPolicy p) {
  switch (p) {
    case ResolutionPolicy::ReSequence: return "ReSequence";
    case ResolutionPolicy::ReRoute: return "ReRoute";
    case ResolutionPolicy::GroundDelay: return "GroundDelay";
  }
  return "?";
}

ResolutionPolicy policy_for(DisturbanceCause c) {
  switch (c) {
    case DisturbanceCause::FuelCritical:
    case DisturbanceCause::MedicalPriority:
      return ResolutionPolicy::ReSequence;
    case DisturbanceCause::WeatherDeviation:
    case DisturbanceCause::EquipmentFault:
      return ResolutionPolicy::ReRoute;
    case DisturbanceCause::RunwayBlockage:
      return ResolutionPolicy::GroundDelay;
  }
  return ResolutionPolicy::ReSequence;
}

const std::vector<FlightPhase>& eligible_phases(DisturbanceCause c) {
  // ReRoute rides the path restart, so its causes are confined to phases
  // from which OnPath is reachable without an illegal backward edge.
  static const std::vector<FlightPhase> weather{FlightPhase::OnPath};
  static const std::vector<FlightPhase> equipment{FlightPhase::AtEntryGate,
                                                  FlightPhase::OnPath};
  // Once the final descent starts the queue position is spent; a medical
  // priority on those last legs has nothing left to expedite.
  static const std::vector<FlightPhase> medical{FlightPhase::OnPath,
                                                FlightPhase::HoldingPattern,
                                                FlightPhase::ToMeteringFix};
  static const std::vector<FlightPhase> fuel{FlightPhase::HoldingPattern};
  static const std::vector<FlightPhase> blockage{FlightPhase::OnRunway,
                                                 FlightPhase::Backtrack};
  switch (c) {
    case DisturbanceCause::WeatherDeviation: return weather;
    case DisturbanceCause::MedicalPriority: return medical;
    case DisturbanceCause::FuelCritical: return fuel;
    case DisturbanceCause::EquipmentFault: return equipment;
    case DisturbanceCause::RunwayBlockage: return blockage;
  }
  return weather;
}

double CauseModel::probability(DisturbanceCause c) const {
  switch (c) {
    case DisturbanceCause::WeatherDeviation: return weather_deviation;
    case DisturbanceCause::MedicalPriority: return medical_priority;
    case DisturbanceCause::FuelCritical: return fuel_critical;
    case DisturbanceCause::EquipmentFault: return equipment_fault;
    case DisturbanceCause::RunwayBlockage: return runway_blockage;
  }
  return 0.0;
}

std::vector<std::string> CauseModel::validate() const {
  std::vector<std::string> errors;
  double total = 0.0;
  for (DisturbanceCause c : kAllCauses) {
    double p = probability(c);
    total += p;
    if (p < 0.0 || p > 1.0) {
      errors.push_back(std::string("causes.") + to_string(c) +
                       " must be within [0, 1]");
    }
  }
  if (total > 1.0) {
    errors.push_back("causes: combined per-minute probability exceeds 1");
  }
  return errors;
}

std::vector<SampledDisturbance> sample_disturbances(
    const std::vector<std::pair<std::string, FlightPhase>>& eligible_agents,
    const CauseModel& model, RngStream& rng) {
  std::vector<SampledDisturbance> hits;
  for (const auto& [id, phase] : eligible_agents) {
    for (DisturbanceCause c : kAllCauses) {
      const auto& phases = eligible_phases(c);
      bool eligible = false;
      for (FlightPhase p : phases) {
        if (p == phase) eligible = true;
      }
      if (!eligible) continue;
      if (rng.bernoulli(model.probability(c))) {
        hits.push_back({id, c});
      }
    }
  }
  return hits;
}

ResolutionPlan resolve(const DisturbanceEvent& event,
                       const AircraftAgent& agent, const LandingQueue& queue,
                       const HoldingStack& stack, int corridors_free) {
  (void)stack;
  ResolutionPlan plan;
  plan.policy = policy_for(event.cause);
  switch (plan.policy) {
    case ResolutionPolicy::ReSequence: {
      auto idx = queue.index_of(agent.id);
      // Once the flight has left the queue for the descent pipeline there is
      // no sequence to amend: a human takes over. Already at the head is
      // fine; the promote is a no-op that still closes the event.
      if (!idx) {
        plan.structural_miss = true;
        return plan;
      }
      plan.applicable = true;
      plan.promote_to_head = true;
      return plan;
    }
    case ResolutionPolicy::ReRoute: {
      // The restart can only ride the path leg itself; anywhere else the
      // deviation needs a human-issued vector.
      if (agent.phase != FlightPhase::OnPath) {
        plan.structural_miss = true;
        return plan;
      }
      if (corridors_free <= 0) return plan;  // transient: wait for a corridor
      plan.applicable = true;
      plan.restart_on_path = true;
      return plan;
    }
    case ResolutionPolicy::GroundDelay: {
      plan.applicable = true;
      plan.block_runway = event.target;
      return plan;
    }
  }
  return plan;
}

HandledFractions handled_fractions(
    const std::map<std::string, std::vector<DisturbanceOutcome>>& by_flight,
    int total_flights) {
  HandledFractions out;
  out.total_flights = total_flights;
  for (const auto& [flight, outcomes] : by_flight) {
    bool escalated = false;
    for (DisturbanceOutcome o : outcomes) {
      if (o == DisturbanceOutcome::Escalated) escalated = true;
    }
    ++out.disturbed_flights;
    if (escalated) ++out.escalated_flights;
  }
  int handled = out.disturbed_flights - out.escalated_flights;
  out.handled_fraction =
      out.disturbed_flights == 0
          ? 1.0
          : static_cast<double>(handled) / out.disturbed_flights;
  out.handled_fraction_all =
      total_flights == 0
          ? 1.0
          : static_cast<double>(total_flights - out.escalated_flights) /
                total_flights;
  return out;
}

}  // namespace atcsim
