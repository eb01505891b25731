#include "atcsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "atcsim/disturbance.hpp"
#include "atcsim/errors.hpp"

namespace atcsim {

RunMetrics compute_metrics(const std::vector<Event>& events) {
  if (events.empty() || events.front().kind != "run_meta") {
    throw SimError(Err::TruncatedLog, "log does not open with run_meta");
  }
  if (events.back().kind != "run_end") {
    throw SimError(Err::TruncatedLog, "log does not close with run_end");
  }

  RunMetrics m;
  const Json& meta = events.front().payload;
  m.name = meta.value("name", "");
  m.scenario = meta.value("scenario", "");
  m.seed = meta.value("seed", uint64_t{0});
  m.duration_hr = meta.value("duration_hr", 0.0);
  int64_t end_t = events.back().t;

  std::map<std::string, std::string> event_flight;  // disturbance id -> flight
  std::map<std::string, std::vector<DisturbanceOutcome>> outcomes_by_flight;
  std::map<std::string, DisturbanceOutcome> event_outcome;

  // Holding episodes per flight: entry time of an open episode, plus sums.
  std::map<std::string, int64_t> holding_since;
  double holding_total_s = 0.0;

  for (const Event& e : events) {
    if (e.kind == "arrival_entered") {
      m.arrivals_entered += 1;
    } else if (e.kind == "landing") {
      m.landings += 1;
    } else if (e.kind == "takeoff") {
      m.takeoffs += 1;
    } else if (e.kind == "divert") {
      m.diversions += 1;
    } else if (e.kind == "exit") {
      if (e.payload.value("kind", "") == "arrival") {
        m.arrival_exits += 1;
      } else {
        m.departure_exits += 1;
      }
    } else if (e.kind == "disturbance_raised") {
      m.disturbances_raised += 1;
      event_flight[e.subject] = e.payload.value("flight", "");
      event_outcome[e.subject] = DisturbanceOutcome::Pending;
    } else if (e.kind == "disturbance_resolved") {
      m.disturbances_resolved += 1;
      event_outcome[e.subject] = DisturbanceOutcome::Resolved;
    } else if (e.kind == "disturbance_escalated") {
      m.escalations += 1;
      event_outcome[e.subject] = DisturbanceOutcome::Escalated;
    } else if (e.kind == "supervision_gap") {
      m.supervision_gaps += 1;
    } else if (e.kind == "failover") {
      m.failovers += 1;
    } else if (e.kind == "failback") {
      m.failbacks += 1;
    } else if (e.kind == "fault") {
      m.faults += 1;
    } else if (e.kind == "msg_send") {
      m.messages_sent += 1;
    } else if (e.kind == "msg_drop") {
      m.messages_dropped += 1;
    } else if (e.kind == "phase") {
      std::string to = e.payload.value("to", "");
      std::string from = e.payload.value("from", "");
      if (to == "HoldingPattern") {
        holding_since[e.subject] = e.t;
      } else if (from == "HoldingPattern") {
        auto it = holding_since.find(e.subject);
        if (it != holding_since.end()) {
          holding_total_s += static_cast<double>(e.t - it->second);
          m.holding_episodes += 1;
          holding_since.erase(it);
        }
      }
    }
  }
  // Episodes still open when the run ends close at the horizon.
  for (const auto& [flight, since] : holding_since) {
    holding_total_s += static_cast<double>(end_t - since);
    m.holding_episodes += 1;
  }

  for (const auto& [eid, outcome] : event_outcome) {
    outcomes_by_flight[event_flight[eid]].push_back(outcome);
  }
  m.total_flights =
      static_cast<int>(m.arrivals_entered) + static_cast<int>(m.takeoffs);
  HandledFractions hf = handled_fractions(outcomes_by_flight, m.total_flights);
  m.handled_fraction = hf.handled_fraction;
  m.handled_fraction_all = hf.handled_fraction_all;
  m.disturbed_flights = hf.disturbed_flights;
  m.escalated_flights = hf.escalated_flights;

  if (m.duration_hr > 0.0) {
    m.movements_per_hr =
        static_cast<double>(m.landings + m.takeoffs) / m.duration_hr;
    m.landings_per_hr = static_cast<double>(m.landings) / m.duration_hr;
    m.takeoffs_per_hr = static_cast<double>(m.takeoffs) / m.duration_hr;
  }
  if (m.holding_episodes > 0) {
    m.mean_holding_time_s = holding_total_s / m.holding_episodes;
  }
  return m;
}

Json metrics_json(const RunMetrics& m) {
  return Json{{"name", m.name},
              {"scenario", m.scenario},
              {"seed", m.seed},
              {"duration_hr", m.duration_hr},
              {"arrivals_entered", m.arrivals_entered},
              {"landings", m.landings},
              {"takeoffs", m.takeoffs},
              {"diversions", m.diversions},
              {"arrival_exits", m.arrival_exits},
              {"departure_exits", m.departure_exits},
              {"disturbances_raised", m.disturbances_raised},
              {"disturbances_resolved", m.disturbances_resolved},
              {"escalations", m.escalations},
              {"supervision_gaps", m.supervision_gaps},
              {"failovers", m.failovers},
              {"failbacks", m.failbacks},
              {"faults", m.faults},
              {"messages_sent", m.messages_sent},
              {"messages_dropped", m.messages_dropped},
              {"total_flights", m.total_flights},
              {"disturbed_flights", m.disturbed_flights},
              {"escalated_flights", m.escalated_flights},
              {"movements_per_hr", m.movements_per_hr},
              {"landings_per_hr", m.landings_per_hr},
              {"takeoffs_per_hr", m.takeoffs_per_hr},
              {"handled_fraction", m.handled_fraction},
              {"handled_fraction_all", m.handled_fraction_all},
              {"mean_holding_time_s", m.mean_holding_time_s},
              {"holding_episodes", m.holding_episodes}};
}

Stats summarize(const std::vector<double>& xs) {
  Stats s;
  if (xs.empty()) return s;
  double sum = 0.0;
  s.min = xs.front();
  s.max = xs.front();
  for (double x : xs) {
    sum += x;
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double acc = 0.0;
    for (double x : xs) acc += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(acc / static_cast<double>(xs.size() - 1));
  }
  return s;
}

AggregateMetrics aggregate(const std::vector<RunMetrics>& runs) {
  if (runs.empty()) {
    throw SimError(Err::EmptyInput, "aggregate of zero runs");
  }
  AggregateMetrics agg;
  agg.name = runs.front().name;
  agg.scenario = runs.front().scenario;
  agg.runs = static_cast<int>(runs.size());
  for (const RunMetrics& r : runs) {
    if (r.scenario != agg.scenario) {
      throw SimError(Err::MixedScenarios,
                     "aggregate mixes " + agg.scenario + " with " + r.scenario);
    }
    agg.seeds.push_back(r.seed);
  }
  std::sort(agg.seeds.begin(), agg.seeds.end());

  auto put = [&](const char* key, auto pick) {
    std::vector<double> xs;
    xs.reserve(runs.size());
    for (const RunMetrics& r : runs) {
      xs.push_back(static_cast<double>(pick(r)));
    }
    agg.fields[key] = summarize(xs);
  };
  put("movements_per_hr", [](const RunMetrics& r) { return r.movements_per_hr; });
  put("landings_per_hr", [](const RunMetrics& r) { return r.landings_per_hr; });
  put("takeoffs_per_hr", [](const RunMetrics& r) { return r.takeoffs_per_hr; });
  put("handled_fraction", [](const RunMetrics& r) { return r.handled_fraction; });
  put("handled_fraction_all",
      [](const RunMetrics& r) { return r.handled_fraction_all; });
  put("mean_holding_time_s",
      [](const RunMetrics& r) { return r.mean_holding_time_s; });
  put("escalations", [](const RunMetrics& r) { return r.escalations; });
  put("diversions", [](const RunMetrics& r) { return r.diversions; });
  put("disturbances_raised",
      [](const RunMetrics& r) { return r.disturbances_raised; });
  put("supervision_gaps", [](const RunMetrics& r) { return r.supervision_gaps; });
  put("faults", [](const RunMetrics& r) { return r.faults; });
  return agg;
}

Json aggregate_json(const AggregateMetrics& agg) {
  Json fields = Json::object();
  for (const auto& [key, s] : agg.fields) {
    fields[key] = Json{
        {"mean", s.mean}, {"sd", s.sd}, {"min", s.min}, {"max", s.max}};
  }
  return Json{{"name", agg.name},
              {"scenario", agg.scenario},
              {"runs", agg.runs},
              {"seeds", agg.seeds},
              {"fields", std::move(fields)}};
}

std::string aggregate_text(const AggregateMetrics& agg) {
  std::ostringstream out;
  out << "scenario " << agg.name << " (" << agg.scenario << "), " << agg.runs
      << " runs\n";
  for (const auto& [key, s] : agg.fields) {
    char line[160];
    std::snprintf(line, sizeof(line),
                  "  %-22s mean %10.4f  sd %9.4f  min %10.4f  max %10.4f\n",
                  key.c_str(), s.mean, s.sd, s.min, s.max);
    out << line;
  }
  return out.str();
}

}  // namespace atcsim
