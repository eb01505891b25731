#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "atcsim/event_log.hpp"
#include "atcsim/messaging.hpp"

namespace atcsim {

// Everything reported about one run, derived entirely from its event log.
// Rates are per simulated hour over the configured horizon.
struct RunMetrics {
  std::string name;
  std::string scenario;  // scenario hash from the log header
  uint64_t seed = 0;
  double duration_hr = 0.0;

  int64_t arrivals_entered = 0;
  int64_t landings = 0;
  int64_t takeoffs = 0;
  int64_t diversions = 0;
  int64_t arrival_exits = 0;
  int64_t departure_exits = 0;

  int64_t disturbances_raised = 0;
  int64_t disturbances_resolved = 0;
  int64_t escalations = 0;
  int64_t supervision_gaps = 0;
  int64_t failovers = 0;
  int64_t failbacks = 0;
  int64_t faults = 0;
  int64_t messages_sent = 0;
  int64_t messages_dropped = 0;

  int total_flights = 0;
  int disturbed_flights = 0;
  int escalated_flights = 0;

  double movements_per_hr = 0.0;
  double landings_per_hr = 0.0;
  double takeoffs_per_hr = 0.0;
  double handled_fraction = 1.0;      // disturbed flights fully self-handled
  double handled_fraction_all = 1.0;  // same, over every flight
  double mean_holding_time_s = 0.0;
  int holding_episodes = 0;
};

// Derives metrics from a parsed log. The log must open with run_meta and
// close with run_end; anything else throws TruncatedLog.
RunMetrics compute_metrics(const std::vector<Event>& events);

Json metrics_json(const RunMetrics& m);

struct Stats {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for fewer than two runs
  double min = 0.0;
  double max = 0.0;
};

Stats summarize(const std::vector<double>& xs);

// Cross-seed summary of one scenario. Throws EmptyInput for no runs and
// MixedScenarios when the runs disagree on the scenario hash.
struct AggregateMetrics {
  std::string name;
  std::string scenario;
  int runs = 0;
  std::vector<uint64_t> seeds;  // sorted
  std::map<std::string, Stats> fields;
};

AggregateMetrics aggregate(const std::vector<RunMetrics>& runs);

Json aggregate_json(const AggregateMetrics& agg);
std::string aggregate_text(const AggregateMetrics& agg);

}  // namespace atcsim
