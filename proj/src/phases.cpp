#include "atcsim/phases.hpp"

namespace atcsim {

const char* to_string(FlightPhase p) {
  switch (p) {
    case FlightPhase::ArrivalIntoAirspace: return "ArrivalIntoAirspace";
    case FlightPhase::AtEntryGate: return "AtEntryGate";
    case FlightPhase::OnPath: return "OnPath";
    case FlightPhase::HoldingPattern: return "HoldingPattern";
    case FlightPhase::ToMeteringFix: return "ToMeteringFix";
    case FlightPhase::AtMeteringFix: return "AtMeteringFix";
    case FlightPhase::FinalDescent: return "FinalDescent";
    case FlightPhase::OnRunway: return "OnRunway";
    case FlightPhase::Backtrack: return "Backtrack";
    case FlightPhase::Departed: return "Departed";
    case FlightPhase::Diverted: return "Diverted";
  }
  return "?";
}

std::optional<FlightPhase> phase_from_string(std::string_view s) {
  for (FlightPhase p : kAllPhases) {
    if (s == to_string(p)) return p;
  }
  return std::nullopt;
}

const std::set<PhaseEdge>& legal_transitions() {
  static const std::set<PhaseEdge> edges = [] {
    std::set<PhaseEdge> e{
        {FlightPhase::ArrivalIntoAirspace, FlightPhase::AtEntryGate},
        {FlightPhase::AtEntryGate, FlightPhase::OnPath},
        {FlightPhase::OnPath, FlightPhase::HoldingPattern},
        {FlightPhase::OnPath, FlightPhase::ToMeteringFix},
        {FlightPhase::HoldingPattern, FlightPhase::ToMeteringFix},
        {FlightPhase::ToMeteringFix, FlightPhase::AtMeteringFix},
        {FlightPhase::AtMeteringFix, FlightPhase::FinalDescent},
        {FlightPhase::FinalDescent, FlightPhase::OnRunway},
        {FlightPhase::OnRunway, FlightPhase::Backtrack},
        {FlightPhase::OnRunway, FlightPhase::Departed},
        {FlightPhase::Backtrack, FlightPhase::Departed},
    };
    // Diversion is reachable from every phase that has not touched the
    // runway and is not already terminal.
    for (FlightPhase p : kAllPhases) {
      if (p == FlightPhase::OnRunway || p == FlightPhase::Backtrack ||
          p == FlightPhase::Departed) {
        continue;
      }
      e.emplace(p, FlightPhase::Diverted);
    }
    return e;
  }();
  return edges;
}

bool transition_allowed(FlightPhase from, FlightPhase to) {
  return legal_transitions().count({from, to}) > 0;
}

}  // namespace atcsim
