#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"

#include "atcsim/engine.hpp"
#include "atcsim/errors.hpp"
#include "atcsim/rng.hpp"
#include "atcsim/scenario.hpp"

using namespace atcsim;

namespace {

// Calibrated base configuration with the stochastic parts switched off, so
// each test re-enables exactly the machinery it exercises.
ScenarioFile quiet_scenario() {
  ParseOutcome out = parse_scenario(builtin_scenario("mumbai"));
  REQUIRE(out.ok());
  ScenarioFile s = *out.scenario;
  s.name = "quiet";
  s.duration_hr = 0.5;
  s.strict_mode = true;
  s.traffic.arrival_rate_per_hr = 0.0;
  s.traffic.departure_rate_per_hr = 0.0;
  s.traffic.jitter_frac = 0.0;
  s.causes.weather_deviation = 0.0;
  s.causes.medical_priority = 0.0;
  s.causes.fuel_critical = 0.0;
  s.causes.equipment_fault = 0.0;
  s.causes.runway_blockage = 0.0;
  return s;
}

ScriptedRecord scripted(int64_t t, const std::string& kind,
                        Json payload = Json::object()) {
  ScriptedRecord r;
  r.time = t;
  r.kind = kind;
  r.payload = std::move(payload);
  return r;
}

int count_kind(const std::vector<Event>& events, const std::string& kind) {
  int n = 0;
  for (const Event& e : events) {
    if (e.kind == kind) n += 1;
  }
  return n;
}

std::vector<Event> events_of(const std::vector<Event>& events,
                             const std::string& kind) {
  std::vector<Event> out;
  for (const Event& e : events) {
    if (e.kind == kind) out.push_back(e);
  }
  return out;
}

std::vector<std::string> phase_trace(const std::vector<Event>& events,
                                     const std::string& subject) {
  std::vector<std::string> trace;
  for (const Event& e : events) {
    if (e.kind == "phase" && e.subject == subject) {
      trace.push_back(e.payload.at("to").get<std::string>());
    }
  }
  return trace;
}

AirspaceConfig crossing_airspace() {
  AirspaceConfig cfg;
  cfg.separation_s = 90;
  cfg.runways = {{"RW27", RunwayMode::Landing, {"RW14"}},
                 {"RW14", RunwayMode::Takeoff, {"RW27"}}};
  return cfg;
}

}  // namespace

// ---------------------------------------------------------------------------
// Runway exclusion

TEST_CASE("a granted runway excludes followers until it clears") {
  AirspaceConfig cfg = crossing_airspace();
  std::map<std::string, RunwayOcc> occ{{"RW27", {}}, {"RW14", {}}};

  CHECK(claim_runway(occ, cfg, "RW27", "AR0001", 0, 50) ==
        ClaimResult::Granted);
  CHECK(occ["RW27"].occupant == "AR0001");
  CHECK(occ["RW27"].occupied_from == 0);
  CHECK(occ["RW27"].occupied_until == 50);

  // Occupied: a second landing queues.
  CHECK(claim_runway(occ, cfg, "RW27", "AR0002", 20, 50) ==
        ClaimResult::Queued);
  // The crossing runway is blocked for the same window.
  CHECK(claim_runway(occ, cfg, "RW14", "DP0001", 20, 60) ==
        ClaimResult::Queued);
  // Once clear, the crossing runway opens (its own separation clock is
  // untouched by RW27 grants).
  CHECK(claim_runway(occ, cfg, "RW14", "DP0001", 50, 60) ==
        ClaimResult::Granted);

  // Same-runway start-to-start separation outlasts the occupancy itself.
  CHECK(claim_runway(occ, cfg, "RW27", "AR0002", 89, 50) ==
        ClaimResult::Queued);
  // At t=110 RW14 (granted at 50, 60 s roll) has just cleared and the 90 s
  // separation on RW27 has lapsed.
  CHECK(claim_runway(occ, cfg, "RW27", "AR0002", 110, 50) ==
        ClaimResult::Granted);
}

TEST_CASE("a blocked runway refuses grants until the block lifts") {
  AirspaceConfig cfg = crossing_airspace();
  cfg.separation_s = 0;
  std::map<std::string, RunwayOcc> occ{{"RW27", {}}, {"RW14", {}}};
  occ["RW27"].blocked_until = 100;

  CHECK(claim_runway(occ, cfg, "RW27", "AR0001", 99, 50) ==
        ClaimResult::Queued);
  CHECK(claim_runway(occ, cfg, "RW27", "AR0001", 100, 50) ==
        ClaimResult::Granted);
}

TEST_CASE("claiming an unknown runway throws") {
  AirspaceConfig cfg = crossing_airspace();
  std::map<std::string, RunwayOcc> occ{{"RW27", {}}};
  CHECK_THROWS_AS(claim_runway(occ, cfg, "RW09", "AR0001", 0, 50), SimError);
  try {
    claim_runway(occ, cfg, "RW09", "AR0001", 0, 50);
  } catch (const SimError& e) {
    CHECK(e.code() == Err::NotFound);
  }
}

TEST_CASE("random claim traffic never produces conflicting grants") {
  AirspaceConfig cfg = crossing_airspace();
  std::map<std::string, RunwayOcc> occ{{"RW27", {}}, {"RW14", {}}};
  RngStream rng(1712);

  struct Grant {
    std::string runway;
    int64_t from;
    int64_t until;
  };
  std::vector<Grant> grants;
  int64_t serial = 0;
  for (int64_t t = 0; t < 2000; ++t) {
    if (rng.bernoulli(0.3)) {
      const char* rw = rng.bernoulli(0.5) ? "RW27" : "RW14";
      int64_t duration = 20 + rng.uniform_int(0, 100);
      if (claim_runway(occ, cfg, rw, "AC" + std::to_string(++serial), t,
                       duration) == ClaimResult::Granted) {
        grants.push_back({rw, t, t + duration});
      }
    }
  }
  REQUIRE(grants.size() >= 10);
  for (size_t i = 0; i < grants.size(); ++i) {
    for (size_t j = i + 1; j < grants.size(); ++j) {
      bool overlap =
          grants[i].from < grants[j].until && grants[j].from < grants[i].until;
      // RW27 and RW14 cross: no two grants may overlap at all.
      CHECK(!overlap);
      if (grants[i].runway == grants[j].runway) {
        CHECK(grants[j].from - grants[i].from >= cfg.separation_s);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Whole-run behaviour

TEST_CASE("an empty scenario runs to the horizon without activity") {
  ScenarioFile sc = quiet_scenario();
  Engine engine(sc, 1);
  CHECK(engine.horizon_s() == 1800);
  engine.run();

  const EngineState& st = engine.state();
  CHECK(st.clock_s == 1800);
  CHECK(st.agents.empty());
  CHECK(st.arrivals_entered == 0);
  CHECK(st.landings == 0);
  CHECK(st.takeoffs == 0);
  CHECK(st.diversions == 0);
  CHECK(st.fault_count == 0);
  CHECK(st.queue.size() == 0);

  const std::vector<Event>& events = engine.log().events();
  REQUIRE(!events.empty());
  CHECK(events.front().kind == "run_meta");
  CHECK(events.front().payload.at("name").get<std::string>() == "quiet");
  CHECK(events.front().payload.at("seed").get<uint64_t>() == 1);
  CHECK(events.front().payload.at("strict").get<bool>());
  CHECK(events.back().kind == "run_end");
  CHECK(events.back().payload.at("faults").get<int64_t>() == 0);
  CHECK(count_kind(events, "arrival_entered") == 0);
  CHECK(count_kind(events, "phase") == 0);
  // Supervision still breathes: one heartbeat every 5 s.
  CHECK(count_kind(events, "msg_send") == 360);
}

TEST_CASE("a single uncontended arrival flies the nominal profile") {
  ScenarioFile sc = quiet_scenario();
  sc.scripted_events = {scripted(5, "arrival")};
  Engine engine(sc, 3);
  engine.run();

  const std::vector<Event>& events = engine.log().events();
  CHECK(engine.state().fault_count == 0);
  CHECK(engine.state().arrivals_entered == 1);
  CHECK(engine.state().landings == 1);
  CHECK(engine.state().arrival_exits == 1);
  CHECK(engine.state().agents.empty());  // landed and swept out

  // No contention: the holding pattern is never entered.
  CHECK(phase_trace(events, "AR0001") ==
        std::vector<std::string>{"AtEntryGate", "OnPath", "ToMeteringFix",
                                 "AtMeteringFix", "FinalDescent", "OnRunway",
                                 "Backtrack", "Departed"});

  std::vector<Event> exits = events_of(events, "exit");
  REQUIRE(exits.size() == 1);
  CHECK(exits[0].subject == "AR0001");
  CHECK(exits[0].payload.at("reason").get<std::string>() == "landed");
  CHECK(exits[0].payload.at("kind").get<std::string>() == "arrival");

  // One landing grant on the landing runway, none extended.
  std::vector<Event> grants = events_of(events, "runway_grant");
  REQUIRE(grants.size() == 1);
  CHECK(grants[0].subject == "RW27");
  CHECK(grants[0].payload.at("flight").get<std::string>() == "AR0001");
  CHECK(grants[0].payload.at("kind").get<std::string>() == "landing");

  // The queue passes through admit and remove exactly once each.
  std::vector<Event> ops = events_of(events, "queue_op");
  std::vector<std::string> op_kinds;
  for (const Event& e : ops) {
    if (e.payload.at("accepted").get<bool>()) {
      op_kinds.push_back(e.payload.at("op").get<std::string>());
    }
  }
  CHECK(op_kinds == std::vector<std::string>{"admit", "remove"});

  // The approach handoff is announced to the supervisor.
  bool saw_entry_notify = false;
  for (const Event& e : events_of(events, "msg_send")) {
    if (e.payload.at("kind").get<std::string>() == "EntryNotify") {
      saw_entry_notify = true;
    }
  }
  CHECK(saw_entry_notify);
}

TEST_CASE("runs are byte-identical per scenario and seed") {
  ParseOutcome out = parse_scenario(builtin_scenario("mumbai-lossy"));
  REQUIRE(out.ok());

  Engine a(*out.scenario, 5);
  a.run();
  Engine b(*out.scenario, 5);
  b.run();
  CHECK(a.log().text() == b.log().text());
  CHECK(a.log().size() == b.log().size());

  Engine c(*out.scenario, 6);
  c.run();
  CHECK(a.log().text() != c.log().text());
}

TEST_CASE("poisson traffic hits the configured rate within sampling noise") {
  ScenarioFile sc = quiet_scenario();
  sc.duration_hr = 1.0;
  sc.traffic.arrival_rate_per_hr = 38.0;
  Engine engine(sc, 11);
  engine.run();

  // Poisson(38): sd ~6.16; three sigma keeps flaky failures out while any
  // rate bug (per-second vs per-hour, double counting) lands far outside.
  int64_t entered = engine.state().arrivals_entered;
  CHECK(entered >= 20);
  CHECK(entered <= 56);
  CHECK(engine.state().fault_count == 0);
}

TEST_CASE("arrival and departure conservation holds at the horizon") {
  ParseOutcome out = parse_scenario(builtin_scenario("mumbai"));
  REQUIRE(out.ok());
  ScenarioFile sc = *out.scenario;
  sc.duration_hr = 0.5;
  Engine engine(sc, 42);
  engine.run();

  const EngineState& st = engine.state();
  int64_t arrivals_live = 0;
  int64_t departures_live = 0;
  for (const auto& [id, agent] : st.agents) {
    if (agent.kind == AircraftKind::Arrival) {
      arrivals_live += 1;
    } else {
      departures_live += 1;
    }
  }
  CHECK(st.arrivals_entered == st.arrival_exits + arrivals_live);
  CHECK(st.takeoffs == st.departure_exits + departures_live);
  CHECK(st.fault_count == 0);

  const Event& end = engine.log().events().back();
  CHECK(end.kind == "run_end");
  CHECK(end.payload.at("arrivals_entered").get<int64_t>() ==
        st.arrivals_entered);
  CHECK(static_cast<int64_t>(end.payload.at("in_system_arrivals").size()) ==
        arrivals_live);
  CHECK(static_cast<int64_t>(end.payload.at("in_system_departures").size()) ==
        departures_live);
}

TEST_CASE("supervision fails over on heartbeat silence and back on revival") {
  ScenarioFile sc = quiet_scenario();
  sc.scripted_events = {scripted(600, "kill_supervisor",
                                 Json{{"role", "ATC"}, {"duration_s", 300}})};
  Engine engine(sc, 17);
  engine.run();

  const std::vector<Event>& events = engine.log().events();
  std::vector<Event> downs = events_of(events, "supervisor_down");
  REQUIRE(downs.size() == 1);
  CHECK(downs[0].t == 600);
  CHECK(downs[0].subject == "ATC");
  CHECK(downs[0].payload.at("until").get<int64_t>() == 900);

  // Last heartbeat left at 595 and landed at 596; the 30 s timeout lapses
  // first at 627. Revival at 900 beats at once; the beat lands at 901.
  std::vector<Event> failovers = events_of(events, "failover");
  REQUIRE(failovers.size() == 1);
  CHECK(failovers[0].t == 627);
  CHECK(failovers[0].subject == "TRACON");
  CHECK(failovers[0].payload.at("gap_s").get<int64_t>() == 31);

  std::vector<Event> failbacks = events_of(events, "failback");
  REQUIRE(failbacks.size() == 1);
  CHECK(failbacks[0].t == 901);
  CHECK(failbacks[0].subject == "ATC");

  std::vector<Event> ups = events_of(events, "supervisor_up");
  REQUIRE(ups.size() == 1);
  CHECK(ups[0].t == 900);

  // The backup held the fort alone: never a moment with nobody in charge.
  CHECK(count_kind(events, "supervision_gap") == 0);
  CHECK(engine.state().fault_count == 0);
}

TEST_CASE("killing both supervisors opens a supervision gap") {
  ScenarioFile sc = quiet_scenario();
  sc.scripted_events = {scripted(100, "kill_supervisor",
                                 Json{{"role", "ATC"}, {"duration_s", 60}}),
                        scripted(100, "kill_supervisor",
                                 Json{{"role", "TRACON"}, {"duration_s", 60}})};
  Engine engine(sc, 17);
  engine.run();

  const std::vector<Event>& events = engine.log().events();
  CHECK(count_kind(events, "supervision_gap") == 60);
  CHECK(engine.state().supervision_gap_count == 60);

  // The revived backup still remembers the pre-outage heartbeat, so it
  // grabs control once before the first fresh beat hands it straight back.
  std::vector<Event> failovers = events_of(events, "failover");
  REQUIRE(failovers.size() == 1);
  CHECK(failovers[0].t == 160);
  std::vector<Event> failbacks = events_of(events, "failback");
  REQUIRE(failbacks.size() == 1);
  CHECK(failbacks[0].t == 161);
  CHECK(count_kind(events, "supervisor_up") == 2);
}

TEST_CASE("a forced route amendment restarts the path leg") {
  ScenarioFile sc = quiet_scenario();
  sc.scripted_events = {
      scripted(5, "arrival"),
      scripted(200, "fms_route_amendment", Json{{"flight", "AR0001"}})};
  Engine engine(sc, 9);
  engine.run();

  const std::vector<Event>& events = engine.log().events();
  std::vector<Event> reroutes = events_of(events, "reroute");
  REQUIRE(reroutes.size() == 1);
  CHECK(reroutes[0].subject == "AR0001");
  CHECK(reroutes[0].payload.at("forced").get<bool>());
  CHECK(reroutes[0].payload.at("corridor").get<int>() == -1);

  // The flight still lands, one path restart later.
  CHECK(engine.state().landings == 1);
  CHECK(engine.state().fault_count == 0);
  std::vector<std::string> trace = phase_trace(events, "AR0001");
  CHECK(std::count(trace.begin(), trace.end(), "OnPath") == 1);
  CHECK(trace.back() == "Departed");
}

TEST_CASE("weather on the path resolves through an alternate corridor") {
  ScenarioFile sc = quiet_scenario();
  sc.duration_hr = 0.2;
  sc.causes.weather_deviation = 1.0;
  sc.scripted_events = {scripted(5, "arrival")};
  Engine engine(sc, 13);
  engine.run();

  const std::vector<Event>& events = engine.log().events();
  std::vector<Event> raised = events_of(events, "disturbance_raised");
  REQUIRE(!raised.empty());
  CHECK(raised[0].payload.at("cause").get<std::string>() ==
        "WeatherDeviation");
  CHECK(raised[0].payload.at("flight").get<std::string>() == "AR0001");
  CHECK(raised[0].subject == "DX0001");

  std::vector<Event> resolved = events_of(events, "disturbance_resolved");
  bool corridor_used = false;
  for (const Event& e : resolved) {
    if (e.payload.at("policy").get<std::string>() == "ReRoute" &&
        e.payload.at("corridor").get<int>() == 0) {
      corridor_used = true;
    }
  }
  CHECK(corridor_used);
  CHECK(engine.state().fault_count == 0);
}

TEST_CASE("a runway blockage extends the occupant and blocks the strip") {
  ScenarioFile sc = quiet_scenario();
  sc.causes.runway_blockage = 1.0;
  sc.scripted_events = {scripted(5, "arrival")};
  Engine engine(sc, 21);
  engine.run();

  const std::vector<Event>& events = engine.log().events();
  std::vector<Event> raised = events_of(events, "disturbance_raised");
  REQUIRE(!raised.empty());
  CHECK(raised[0].payload.at("cause").get<std::string>() == "RunwayBlockage");
  CHECK(raised[0].payload.at("target").get<std::string>() == "RW27");

  bool ground_delay = false;
  for (const Event& e : events_of(events, "disturbance_resolved")) {
    if (e.payload.at("policy").get<std::string>() == "GroundDelay") {
      ground_delay = true;
      CHECK(e.payload.at("target").get<std::string>() == "RW27");
    }
  }
  CHECK(ground_delay);

  std::vector<Event> extends = events_of(events, "runway_extend");
  REQUIRE(!extends.empty());
  CHECK(extends[0].subject == "RW27");
  CHECK(extends[0].payload.at("occupant").get<std::string>() == "AR0001");

  // The landing grant itself predates the blockage.
  CHECK(engine.state().landings == 1);
  CHECK(engine.state().fault_count == 0);
}

TEST_CASE("saturating arrivals divert on a full queue without faulting") {
  ScenarioFile sc = quiet_scenario();
  sc.duration_hr = 1.0;
  for (int i = 0; i < 40; ++i) {
    sc.scripted_events.push_back(scripted(10 + i, "arrival"));
  }
  Engine engine(sc, 31);
  engine.run();

  const EngineState& st = engine.state();
  CHECK(st.arrivals_entered == 40);
  CHECK(st.diversions > 0);
  CHECK(st.fault_count == 0);
  CHECK(st.queue.size() <= st.queue.capacity);

  int64_t live = 0;
  for (const auto& [id, agent] : st.agents) {
    (void)agent;
    live += 1;
  }
  CHECK(st.arrivals_entered == st.arrival_exits + live);

  for (const Event& e : events_of(engine.log().events(), "divert")) {
    CHECK(e.payload.at("reason").get<std::string>() == "queue_full");
  }
}

TEST_CASE("departure traffic shares the field through the crossing runway") {
  ScenarioFile sc = quiet_scenario();
  sc.duration_hr = 1.0;
  for (int i = 0; i < 12; ++i) {
    sc.scripted_events.push_back(scripted(30 + 60 * i, "departure"));
  }
  Engine engine(sc, 8);
  engine.run();

  const EngineState& st = engine.state();
  CHECK(st.departures_ready == 12);
  CHECK(st.takeoffs == 12);
  CHECK(st.fault_count == 0);

  std::vector<Event> grants = events_of(engine.log().events(), "runway_grant");
  REQUIRE(grants.size() == 12);
  int64_t last_start = -1000000;
  for (const Event& e : grants) {
    CHECK(e.subject == "RW14");
    CHECK(e.payload.at("kind").get<std::string>() == "takeoff");
    int64_t from = e.payload.at("from").get<int64_t>();
    if (last_start > 0) CHECK(from - last_start >= sc.airspace.separation_s);
    last_start = from;
  }
}

TEST_CASE("stepping advances the clock one second at a time") {
  ScenarioFile sc = quiet_scenario();
  Engine engine(sc, 2);
  CHECK(engine.state().clock_s == 0);
  for (int i = 0; i < 10; ++i) engine.step();
  CHECK(engine.state().clock_s == 10);
  CHECK(engine.seed() == 2);
  CHECK(engine.scenario().name == "quiet");
}

TEST_CASE("strict mumbai stays invariant-clean under full traffic") {
  ParseOutcome out = parse_scenario(builtin_scenario("mumbai"));
  REQUIRE(out.ok());
  ScenarioFile sc = *out.scenario;
  sc.duration_hr = 0.75;
  REQUIRE(sc.strict_mode);
  Engine engine(sc, 1234);
  CHECK_NOTHROW(engine.run());
  CHECK(engine.state().fault_count == 0);
  CHECK(engine.state().clock_s == 2700);
}
