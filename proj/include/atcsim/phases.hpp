#pragma once

#include <optional>
#include <set>
#include <string_view>
#include <utility>

namespace atcsim {

// Flight phases. Arrivals run ArrivalIntoAirspace through Backtrack and
// finish in Departed; departures are spawned OnRunway and climb out in
// Departed. Diverted is terminal.
enum class FlightPhase {
  ArrivalIntoAirspace,
  AtEntryGate,
  OnPath,
  HoldingPattern,
  ToMeteringFix,
  AtMeteringFix,
  FinalDescent,
  OnRunway,
  Backtrack,
  Departed,
  Diverted,
};

inline constexpr FlightPhase kAllPhases[] = {
    FlightPhase::ArrivalIntoAirspace, FlightPhase::AtEntryGate,
    FlightPhase::OnPath,              FlightPhase::HoldingPattern,
    FlightPhase::ToMeteringFix,       FlightPhase::AtMeteringFix,
    FlightPhase::FinalDescent,        FlightPhase::OnRunway,
    FlightPhase::Backtrack,           FlightPhase::Departed,
    FlightPhase::Diverted,
};

const char* to_string(FlightPhase p);
std::optional<FlightPhase> phase_from_string(std::string_view s);

using PhaseEdge = std::pair<FlightPhase, FlightPhase>;

// The closed set of permitted phase transitions. Every edge an aircraft may
// request is here; the engine rejects anything else.
const std::set<PhaseEdge>& legal_transitions();

bool transition_allowed(FlightPhase from, FlightPhase to);

}  // namespace atcsim
