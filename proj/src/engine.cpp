#include "atcsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "atcsim/errors.hpp"

namespace atcsim {

namespace {

std::string seq_id(const char* prefix, int64_t n) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%s%04lld", prefix,
                static_cast<long long>(n));
  return buf;
}

bool is_queueable_phase(FlightPhase p) {
  switch (p) {
    case FlightPhase::ArrivalIntoAirspace:
    case FlightPhase::AtEntryGate:
    case FlightPhase::OnPath:
    case FlightPhase::HoldingPattern:
    case FlightPhase::ToMeteringFix:
    case FlightPhase::AtMeteringFix:
    case FlightPhase::FinalDescent:
      return true;
    default:
      return false;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Runway exclusion

ClaimResult claim_runway(std::map<std::string, RunwayOcc>& occupancy,
                         const AirspaceConfig& cfg, const std::string& runway_id,
                         const std::string& aircraft, int64_t t,
                         int64_t duration_s) {
  auto it = occupancy.find(runway_id);
  if (it == occupancy.end()) {
    throw SimError(Err::NotFound, "claim_runway: " + runway_id);
  }
  RunwayOcc& rw = it->second;
  if (rw.blocked_until > t) return ClaimResult::Queued;
  if (rw.occupied_until > t) return ClaimResult::Queued;
  if (t - rw.last_grant_start < cfg.separation_s) return ClaimResult::Queued;
  if (const RunwayConfig* rc = cfg.runway(runway_id)) {
    for (const std::string& crossing : rc->crosses) {
      auto ci = occupancy.find(crossing);
      if (ci != occupancy.end() && ci->second.occupied_until > t) {
        return ClaimResult::Queued;
      }
    }
  }
  rw.occupant = aircraft;
  rw.occupied_from = t;
  rw.occupied_until = t + duration_s;
  rw.last_grant_start = t;
  return ClaimResult::Granted;
}

// ---------------------------------------------------------------------------
// Construction

Engine::Engine(ScenarioFile scenario, uint64_t seed)
    : sc_(std::move(scenario)),
      seed_(seed),
      rng_arrivals_(derive_stream(seed, "traffic.arrivals")),
      rng_departures_(derive_stream(seed, "traffic.departures")),
      rng_disturbance_(derive_stream(seed, "disturbance")),
      rng_network_(derive_stream(seed, "network")),
      rng_jitter_(derive_stream(seed, "jitter")) {
  st_.queue.capacity = sc_.airspace.queue_capacity;
  st_.atc.role = SupervisorRole::Atc;
  st_.atc.mirrored_queue.capacity = sc_.airspace.queue_capacity;
  st_.tracon.role = SupervisorRole::Tracon;
  st_.tracon.mirrored_queue.capacity = sc_.airspace.queue_capacity;
  st_.stack.base_altitude_ft = sc_.airspace.holding.base_altitude_ft;
  st_.stack.band_width_ft = sc_.airspace.holding.band_width_ft;
  st_.stack.level_capacity = sc_.airspace.holding.level_capacity;
  for (const RunwayConfig& r : sc_.airspace.runways) {
    st_.runways.emplace(r.id, RunwayOcc{});
    if (r.mode == RunwayMode::Landing && landing_runway_.empty()) {
      landing_runway_ = r.id;
    }
    if (r.mode == RunwayMode::Takeoff && takeoff_runway_.empty()) {
      takeoff_runway_ = r.id;
    }
  }
  if (takeoff_runway_.empty()) takeoff_runway_ = landing_runway_;
  st_.corridor_busy_until.assign(
      static_cast<size_t>(std::max(0, sc_.ops.alternate_corridors)), -1);
  scripted_ = sc_.scripted_events;
  std::stable_sort(
      scripted_.begin(), scripted_.end(),
      [](const ScriptedRecord& a, const ScriptedRecord& b) { return a.time < b.time; });
}

// ---------------------------------------------------------------------------
// Top-level stepping

// The order below is the determinism contract: scripted events, traffic,
// disturbance sampling, fuel, message delivery, agent decisions, commit,
// ground-side clearances, supervision, invariants. Changing it changes runs.
void Engine::step() {
  int64_t t = st_.clock_s;
  inboxes_.clear();
  sequencer_ops_.clear();
  effects_.clear();
  new_arrivals_.clear();
  due_external_.clear();

  apply_scripted(t);
  generate_traffic(t);
  if (t % 60 == 0) sample_minute_disturbances(t);
  fuel_tick(t);
  route_deliveries(t);
  evaluate_aircraft(t);
  commit(t);
  issue_clearances(t);
  supervisor_phase(t);
  check_invariants(t);

  st_.clock_s = t + 1;
}

void Engine::run() {
  std::string subject = sc_.name.empty() ? "run" : sc_.name;
  log_.emit(0, "run_meta", subject,
            Json{{"name", sc_.name},
                 {"scenario", scenario_hash(sc_)},
                 {"seed", seed_},
                 {"duration_hr", sc_.duration_hr},
                 {"strict", sc_.strict_mode}});
  int64_t horizon = horizon_s();
  while (st_.clock_s < horizon) step();

  Json arr = Json::array();
  Json dep = Json::array();
  for (const auto& [id, a] : st_.agents) {
    if (!a.alive) continue;
    (a.kind == AircraftKind::Arrival ? arr : dep).push_back(id);
  }
  log_.emit(st_.clock_s, "run_end", subject,
            Json{{"arrivals_entered", st_.arrivals_entered},
                 {"landings", st_.landings},
                 {"takeoffs", st_.takeoffs},
                 {"diversions", st_.diversions},
                 {"departures_ready", st_.departures_ready},
                 {"arrival_exits", st_.arrival_exits},
                 {"departure_exits", st_.departure_exits},
                 {"escalations", st_.escalation_count},
                 {"supervision_gaps", st_.supervision_gap_count},
                 {"faults", st_.fault_count},
                 {"in_system_arrivals", std::move(arr)},
                 {"in_system_departures", std::move(dep)},
                 {"pending_departures",
                  static_cast<int64_t>(st_.pending_departures.size())},
                 {"bus_pending", static_cast<int64_t>(st_.bus.pending_count())}});
}

// ---------------------------------------------------------------------------
// Step phases

void Engine::apply_scripted(int64_t t) {
  for (auto it = revive_at_.begin(); it != revive_at_.end();) {
    if (it->first <= t) {
      SupervisorState& sup = it->second == kAtcId ? st_.atc : st_.tracon;
      sup.alive = true;
      log_.emit(t, "supervisor_up", it->second, Json::object());
      it = revive_at_.erase(it);
    } else {
      ++it;
    }
  }
  while (scripted_cursor_ < scripted_.size() &&
         scripted_[scripted_cursor_].time <= t) {
    const ScriptedRecord& rec = scripted_[scripted_cursor_++];
    if (rec.kind == "arrival") {
      spawn_arrival(t);
    } else if (rec.kind == "departure") {
      queue_departure(t);
    } else if (rec.kind == "kill_supervisor") {
      std::string role = rec.payload.value("role", "");
      SupervisorState& sup = role == kAtcId ? st_.atc : st_.tracon;
      if (sup.alive) {
        sup.alive = false;
        int64_t dur = rec.payload.value("duration_s", int64_t{60});
        revive_at_.emplace_back(t + dur, role);
        log_.emit(t, "supervisor_down", role, Json{{"until", t + dur}});
      }
    } else {
      due_external_.push_back(rec);  // fms / uret / smr records
    }
  }
}

void Engine::generate_traffic(int64_t t) {
  if (rng_arrivals_.bernoulli(sc_.traffic.arrival_rate_per_hr / 3600.0)) {
    spawn_arrival(t);
  }
  if (rng_departures_.bernoulli(sc_.traffic.departure_rate_per_hr / 3600.0)) {
    queue_departure(t);
  }
}

void Engine::spawn_arrival(int64_t t) {
  AircraftAgent a;
  a.id = seq_id("AR", ++arrival_seq_);
  a.kind = AircraftKind::Arrival;
  a.phase = FlightPhase::ArrivalIntoAirspace;
  a.entered_at = t;
  a.phase_entered_at = t;
  a.fuel_remaining_min = sc_.ops.initial_fuel_min;
  a.local_queue.capacity = sc_.airspace.queue_capacity;
  a.entry_gate = static_cast<int>(arrival_seq_ % 8);
  st_.arrivals_entered += 1;
  new_arrivals_.push_back(a.id);
  log_.emit(t, "arrival_entered", a.id, Json{{"gate", a.entry_gate}});
  st_.agents.emplace(a.id, std::move(a));
}

void Engine::queue_departure(int64_t t) {
  PendingDeparture pd;
  pd.id = seq_id("DP", ++departure_seq_);
  pd.ready_at = t;
  pd.duration_s = jittered(sc_.traffic.durations.on_runway_s);
  st_.departures_ready += 1;
  log_.emit(t, "departure_ready", pd.id, Json::object());
  st_.pending_departures.push_back(std::move(pd));
}

void Engine::sample_minute_disturbances(int64_t t) {
  std::vector<std::pair<std::string, FlightPhase>> roster;
  for (const auto& [id, a] : st_.agents) {
    if (a.alive && !a.pending_disturbance) roster.emplace_back(id, a.phase);
  }
  for (const SampledDisturbance& hit :
       sample_disturbances(roster, sc_.causes, rng_disturbance_)) {
    AircraftAgent& a = st_.agents.at(hit.flight);
    if (a.pending_disturbance) continue;  // one live event per flight
    std::string target = hit.flight;
    if (hit.cause == DisturbanceCause::RunwayBlockage) {
      target.clear();
      for (const auto& [rid, rw] : st_.runways) {
        if (rw.occupant == hit.flight && rw.occupied_until > t) {
          target = rid;
          break;
        }
      }
      if (target.empty()) continue;  // rollout already over; nothing to block
    }
    DisturbanceEvent ev;
    ev.event_id = seq_id("DX", ++disturbance_seq_);
    ev.cause = hit.cause;
    ev.flight = hit.flight;
    ev.target = target;
    ev.raised_at = t;
    log_.emit(t, "disturbance_raised", ev.event_id,
              Json{{"cause", to_string(hit.cause)},
                   {"flight", hit.flight},
                   {"target", target}});
    a.pending_disturbance = std::move(ev);
  }
}

void Engine::fuel_tick(int64_t t) {
  for (auto& [id, a] : st_.agents) {
    if (!a.alive) continue;
    bool airborne_inbound =
        a.kind == AircraftKind::Arrival && is_queueable_phase(a.phase);
    bool climbing = a.kind == AircraftKind::Departure &&
                    a.phase == FlightPhase::Departed;
    if (!airborne_inbound && !climbing) continue;
    if (a.fuel_remaining_min <= 0.0) continue;
    a.fuel_remaining_min -= 1.0 / 60.0;
    if (a.fuel_remaining_min <= 0.0) {
      a.fuel_remaining_min = 0.0;
      if (airborne_inbound) {
        fault(t, "fuel_exhausted", Json{{"flight", id}});
      }
    }
  }
}

void Engine::route_deliveries(int64_t t) {
  for (Delivery& d : st_.bus.deliver_due(t)) {
    if (d.recipient == kToSequencer) {
      log_.emit(t, "msg_deliver", d.msg_id,
                Json{{"recipient", kToSequencer}, {"ch", "net"}});
      sequencer_ops_.push_back(std::move(d));
      continue;
    }
    if (d.recipient == kAtcId || d.recipient == kTraconId) {
      SupervisorState& sup = d.recipient == kAtcId ? st_.atc : st_.tracon;
      if (!sup.alive) {
        log_.emit(t, "msg_drop", d.msg_id,
                  Json{{"recipient", d.recipient}, {"reason", "recipient_down"}});
        continue;
      }
      log_.emit(t, "msg_deliver", d.msg_id,
                Json{{"recipient", d.recipient}, {"ch", "net"}});
      if (d.env.kind == MsgKind::Heartbeat && d.env.sender == kAtcId &&
          d.recipient == kTraconId) {
        sup.last_heartbeat_seen = t;
      } else if (d.env.kind == MsgKind::Escalation) {
        std::string eid = d.env.payload.value("event", "");
        if (!sup.answered_escalations.count(eid)) {
          EscalationTicket ticket;
          ticket.event_id = eid;
          ticket.flight = d.env.payload.value("flight", "");
          ticket.policy = d.env.payload.value("policy", "");
          ticket.seen_at = t;
          sup.pending_escalations.emplace(eid, std::move(ticket));
        }
      }
      continue;
    }
    auto it = st_.agents.find(d.recipient);
    if (it == st_.agents.end() || !it->second.alive) {
      // Messages legitimately outlive their recipients (relays to a flight
      // that just landed); dropped, not faulted.
      log_.emit(t, "msg_drop", d.msg_id,
                Json{{"recipient", d.recipient}, {"reason", "unknown_recipient"}});
      continue;
    }
    log_.emit(t, "msg_deliver", d.msg_id,
              Json{{"recipient", d.recipient}, {"ch", "net"}});
    inboxes_[d.recipient].push_back(std::move(d));
  }
}

void Engine::evaluate_aircraft(int64_t t) {
  WorldView view;
  view.t = t;
  view.stack = &st_.stack;
  view.corridors_free = corridors_free(t);
  view.active_supervisor = to_string(st_.active);
  view.escalation_deadline_s = sc_.timeouts.escalation_deadline_s;
  view.holding_lap_s = sc_.traffic.durations.holding_lap_s;

  static const std::vector<Delivery> kNoMail;
  for (const auto& [id, a] : st_.agents) {
    if (!a.alive) continue;
    auto ib = inboxes_.find(id);
    effects_.emplace(
        id, aircraft_step(a, ib == inboxes_.end() ? kNoMail : ib->second, view));
  }
  // Decisions were taken against one frozen snapshot; adopt the updated
  // agent states before any of the requested mutations are applied.
  for (auto& [id, fx] : effects_) st_.agents.at(id) = fx.updated;
}

void Engine::commit(int64_t t) {
  // 1. Drafted messages, in agent id order.
  for (auto& [id, fx] : effects_) {
    for (Envelope& env : fx.messages) send_draft(std::move(env), t);
  }
  // 2. Escalations decided this step.
  for (const auto& [id, fx] : effects_) {
    if (!fx.escalated) continue;
    const AircraftAgent& a = st_.agents.at(id);
    if (!a.pending_disturbance) continue;
    const DisturbanceEvent& ev = *a.pending_disturbance;
    st_.escalation_count += 1;
    log_.emit(t, "disturbance_escalated", ev.event_id,
              Json{{"flight", id}, {"cause", to_string(ev.cause)}});
  }

  // 3. Sequencer: queue operations delivered this step.
  apply_queue_ops(t);

  // 4. Ground delays (runway blockages), then reroutes.
  for (auto& [id, fx] : effects_) {
    if (!fx.wants_ground_delay) continue;
    auto ait = st_.agents.find(id);
    if (ait == st_.agents.end() || !ait->second.pending_disturbance) continue;
    AircraftAgent& a = ait->second;
    DisturbanceEvent ev = *a.pending_disturbance;
    auto rit = st_.runways.find(ev.target);
    if (rit == st_.runways.end()) continue;
    RunwayOcc& rw = rit->second;
    int64_t until = t + sc_.ops.blockage_s;
    rw.blocked_until = std::max(rw.blocked_until, until);
    if (!rw.occupant.empty() && rw.occupied_until > t) {
      auto oi = st_.agents.find(rw.occupant);
      if (oi != st_.agents.end() && oi->second.alive) {
        oi->second.phase_deadline += sc_.ops.blockage_s;
        rw.occupied_until += sc_.ops.blockage_s;
        log_.emit(t, "runway_extend", ev.target,
                  Json{{"occupant", rw.occupant}, {"until", rw.occupied_until}});
      }
    }
    const RunwayConfig* rc = sc_.airspace.runway(ev.target);
    if (rc && rc->mode == RunwayMode::Landing) {
      // Flights on the final leg hold their descent in place until the
      // surface reopens; the approach phase itself never changes.
      for (auto& [fid, f] : st_.agents) {
        if (f.alive && f.kind == AircraftKind::Arrival &&
            f.phase == FlightPhase::FinalDescent) {
          f.phase_deadline = std::max(f.phase_deadline, rw.blocked_until);
        }
      }
    }
    st_.departures_hold_until =
        std::max(st_.departures_hold_until, rw.blocked_until);
    log_.emit(t, "disturbance_resolved", ev.event_id,
              Json{{"flight", id},
                   {"cause", to_string(ev.cause)},
                   {"policy", "GroundDelay"},
                   {"target", ev.target}});
    resolved_events_.insert(ev.event_id);
    Envelope note;
    note.sender = id;
    note.recipients = {kToSupervisor};
    note.kind = MsgKind::Resolution;
    note.payload = Json{{"event", ev.event_id},
                        {"role", "announce"},
                        {"policy", "GroundDelay"},
                        {"flight", id}};
    send_draft(std::move(note), t);
    a.pending_disturbance.reset();
  }

  for (auto& [id, fx] : effects_) {
    if (!fx.forced_reroute && !fx.wants_reroute) continue;
    auto ait = st_.agents.find(id);
    if (ait == st_.agents.end() || !ait->second.alive) continue;
    AircraftAgent& a = ait->second;
    if (fx.forced_reroute) {
      if (a.phase == FlightPhase::OnPath) {
        if (a.corridor >= 0) {
          st_.corridor_busy_until[static_cast<size_t>(a.corridor)] = t;
          a.corridor = -1;
        }
        a.phase_entered_at = t;
        a.phase_deadline = t + jittered(sc_.traffic.durations.on_path_s);
        log_.emit(t, "reroute", id, Json{{"corridor", -1}, {"forced", true}});
        fx.transition.reset();  // the restarted leg supersedes any fallback
      }
      // A directive closes the event whether or not the restart applied;
      // escalated events were already counted when they escalated.
      a.pending_disturbance.reset();
    } else if (a.pending_disturbance && a.phase == FlightPhase::OnPath) {
      int c = -1;
      for (size_t i = 0; i < st_.corridor_busy_until.size(); ++i) {
        if (st_.corridor_busy_until[i] <= t) {
          c = static_cast<int>(i);
          break;
        }
      }
      if (c < 0) continue;  // transient miss; the flight keeps waiting
      DisturbanceEvent ev = *a.pending_disturbance;
      a.corridor = c;
      a.phase_entered_at = t;
      a.phase_deadline = t + jittered(sc_.traffic.durations.on_path_s);
      st_.corridor_busy_until[static_cast<size_t>(c)] = a.phase_deadline;
      log_.emit(t, "reroute", id, Json{{"corridor", c}, {"forced", false}});
      log_.emit(t, "disturbance_resolved", ev.event_id,
                Json{{"flight", id},
                     {"cause", to_string(ev.cause)},
                     {"policy", "ReRoute"},
                     {"corridor", c}});
      resolved_events_.insert(ev.event_id);
      Envelope note;
      note.sender = id;
      note.recipients = {kToSupervisor};
      note.kind = MsgKind::Resolution;
      note.payload = Json{{"event", ev.event_id},
                          {"role", "announce"},
                          {"policy", "ReRoute"},
                          {"flight", id}};
      send_draft(std::move(note), t);
      a.pending_disturbance.reset();
      fx.transition.reset();
    }
  }

  // 5. Landing claims, ordered by first request then id.
  struct LandReq {
    int64_t first_asked;
    std::string id;
  };
  std::vector<LandReq> land_reqs;
  for (auto& [id, fx] : effects_) {
    if (!fx.transition || *fx.transition != FlightPhase::OnRunway) continue;
    auto ait = st_.agents.find(id);
    if (ait == st_.agents.end()) continue;
    AircraftAgent& a = ait->second;
    if (!a.alive || a.kind != AircraftKind::Arrival) continue;
    if (a.runway_requested_at < 0) a.runway_requested_at = t;
    land_reqs.push_back({a.runway_requested_at, id});
  }
  std::sort(land_reqs.begin(), land_reqs.end(),
            [](const LandReq& x, const LandReq& y) {
              return std::tie(x.first_asked, x.id) < std::tie(y.first_asked, y.id);
            });
  for (const LandReq& req : land_reqs) {
    AircraftAgent& a = st_.agents.at(req.id);
    if (a.granted_onrunway_s == 0) {
      a.granted_onrunway_s = jittered(sc_.traffic.durations.on_runway_s);
      a.granted_backtrack_s = jittered(sc_.traffic.durations.backtrack_s);
    }
    int64_t dur = a.granted_onrunway_s + a.granted_backtrack_s;
    if (claim_runway(st_.runways, sc_.airspace, landing_runway_, req.id, t,
                     dur) != ClaimResult::Granted) {
      continue;  // retried next step; the request timestamp keeps its place
    }
    enter_phase(a, FlightPhase::OnRunway, t);
    st_.landings += 1;
    log_.emit(t, "landing", req.id, Json{{"runway", landing_runway_}});
    log_.emit(t, "runway_grant", landing_runway_,
              Json{{"flight", req.id},
                   {"kind", "landing"},
                   {"from", t},
                   {"until", t + dur}});
  }

  // 6. All other requested transitions, in id order.
  for (auto& [id, fx] : effects_) {
    if (!fx.transition) continue;
    FlightPhase to = *fx.transition;
    if (to == FlightPhase::OnRunway) continue;  // landings handled above
    auto ait = st_.agents.find(id);
    if (ait == st_.agents.end() || !ait->second.alive) continue;
    AircraftAgent& a = ait->second;
    FlightPhase from = a.phase;
    if (from == to) continue;
    if (!transition_allowed(from, to)) {
      fault(t, "illegal_transition_request",
            Json{{"flight", id},
                 {"from", to_string(from)},
                 {"to", to_string(to)}});
      continue;
    }
    switch (to) {
      case FlightPhase::HoldingPattern: {
        int lvl = stack_insert(st_.stack, id, st_.queue,
                               sc_.airspace.holding.level_capacity);
        enter_phase(a, FlightPhase::HoldingPattern, t);
        a.next_heartbeat_at = t + sc_.traffic.durations.holding_lap_s;
        log_.emit(t, "stack_join", id, Json{{"level", lvl}});
        break;
      }
      case FlightPhase::ToMeteringFix: {
        bool head =
            !st_.queue.entries.empty() && st_.queue.entries.front() == id;
        if (from == FlightPhase::HoldingPattern) {
          bool leads_base = !st_.stack.levels.empty() &&
                            st_.stack.levels[0].leader == id;
          if (!head || !leads_base) {
            fault(t, "denied_sequencing", Json{{"flight", id}});
            break;
          }
          handover_leadership(st_.stack, id, st_.queue);
          log_.emit(t, "stack_leave", id, Json{{"level", 0}});
          if (!st_.stack.levels.empty() &&
              !st_.stack.levels[0].leader.empty()) {
            const std::string& next = st_.stack.levels[0].leader;
            log_.emit(t, "leader_change", next,
                      Json{{"level", 0}, {"from", id}});
            Envelope hand;
            hand.sender = id;
            hand.recipients = {next};
            hand.kind = MsgKind::Handover;
            hand.payload =
                Json{{"level", 0}, {"queue_version", st_.queue.version}};
            send_draft(std::move(hand), t);
          }
        } else if (!head) {  // direct entry from the path leg
          fault(t, "denied_sequencing", Json{{"flight", id}});
          break;
        }
        enter_phase(a, FlightPhase::ToMeteringFix, t);
        break;
      }
      case FlightPhase::Diverted: {
        if (st_.stack.contains(id)) {
          stack_remove(st_.stack, id, st_.queue);
          log_.emit(t, "stack_leave", id, Json{{"level", -1}});
        }
        enter_phase(a, FlightPhase::Diverted, t);
        st_.diversions += 1;
        log_.emit(t, "divert", id, Json{{"reason", "queue_full"}});
        break;
      }
      default:
        enter_phase(a, to, t);
        break;
    }
  }

  // 7. Departures at the hold point.
  grant_takeoffs(t);

  // 8. Flights whose lifecycle ended this step leave the system.
  remove_finished(t);

  // 9. Holding bookkeeping reflects the final stack of this step.
  sync_stack_flags();
}

void Engine::apply_queue_ops(int64_t t) {
  struct PromoteReq {
    int64_t raised_at;
    std::string target;
    std::string event;
    std::string sender;
  };
  std::vector<PromoteReq> promotes;

  auto nack = [&](const Delivery& d, const std::string& op,
                  const std::string& target, const char* reason) {
    log_.emit(t, "queue_op", target,
              Json{{"op", op},
                   {"accepted", false},
                   {"reason", reason},
                   {"version", st_.queue.version},
                   {"size", st_.queue.size()},
                   {"sender", d.env.sender}});
    Envelope env;
    env.sender = d.env.sender;
    env.recipients = {d.env.sender};
    env.kind = MsgKind::QueueSync;
    // The rejection carries the authoritative state: if the acceptance
    // broadcast for an earlier op was lost, the retry's nack is what heals
    // the requester's replica (a DuplicateId nack is how an aircraft that
    // missed its own admit learns it is already queued).
    Json entries = Json::array();
    for (const std::string& e : st_.queue.entries) entries.push_back(e);
    env.payload = Json{{"op", op},
                       {"target", target},
                       {"accepted", false},
                       {"reason", reason},
                       {"version", st_.queue.version},
                       {"entries", std::move(entries)}};
    send_draft(std::move(env), t);
  };
  auto log_accept = [&](const std::string& op, const std::string& target,
                        const std::string& sender, const std::string& event) {
    Json p{{"op", op},
           {"accepted", true},
           {"version", st_.queue.version},
           {"size", st_.queue.size()},
           {"sender", sender}};
    if (!event.empty()) p["event"] = event;
    log_.emit(t, "queue_op", target, std::move(p));
  };

  for (const Delivery& d : sequencer_ops_) {
    if (d.env.kind != MsgKind::QueueSync) continue;
    std::string op = d.env.payload.value("op", "");
    std::string target = d.env.payload.value("target", "");
    if (op == "admit") {
      AdmitResult r = queue_admit(st_.queue, target);
      if (r == AdmitResult::Admitted) {
        log_accept(op, target, d.env.sender, "");
        broadcast_queue_state(d.env.sender, op, target, t, "");
      } else {
        nack(d, op, target, to_string(r));
      }
    } else if (op == "remove") {
      if (!st_.queue.contains(target)) {
        nack(d, op, target, "NotFound");
      } else {
        queue_remove(st_.queue, target);
        log_accept(op, target, d.env.sender, "");
        broadcast_queue_state(d.env.sender, op, target, t, "");
      }
    } else if (op == "promote") {
      promotes.push_back({d.env.payload.value("raised_at", int64_t{0}), target,
                          d.env.payload.value("event", ""), d.env.sender});
    }
  }

  // Promotions raised earlier outrank later ones; applying in reverse order
  // of (raised_at, flight) leaves the earliest-raised flight at the head.
  std::sort(promotes.begin(), promotes.end(),
            [](const PromoteReq& x, const PromoteReq& y) {
              return std::tie(x.raised_at, x.target) >
                     std::tie(y.raised_at, y.target);
            });
  for (const PromoteReq& pr : promotes) {
    if (resolved_events_.count(pr.event)) continue;  // retry duplicate
    if (!st_.queue.contains(pr.target)) {
      Delivery fake;
      fake.env.sender = pr.sender;
      nack(fake, "promote", pr.target, "NotFound");
      continue;
    }
    auto level_before = st_.stack.level_of(pr.target);
    queue_promote_to_head(st_.queue, pr.target);
    // Repacking against the new order drops the promoted holder to the base
    // level (it now ranks first) and shuffles everyone else accordingly.
    stack_resync_order(st_.stack, st_.queue);
    if (level_before && *level_before != 0) {
      log_.emit(t, "stack_join", pr.target,
                Json{{"level", 0}, {"descended_from", *level_before}});
    }
    log_accept("promote", pr.target, pr.sender, pr.event);
    log_.emit(t, "disturbance_resolved", pr.event,
              Json{{"flight", pr.target}, {"policy", "ReSequence"}});
    resolved_events_.insert(pr.event);
    Envelope note;
    note.sender = pr.target;
    note.recipients = {kToSupervisor};
    note.kind = MsgKind::Resolution;
    note.payload = Json{{"event", pr.event},
                        {"role", "announce"},
                        {"policy", "ReSequence"},
                        {"flight", pr.target}};
    send_draft(std::move(note), t);
    broadcast_queue_state(pr.target, "promote", pr.target, t, pr.event);
  }
}

void Engine::broadcast_queue_state(const std::string& requester,
                                   const std::string& op,
                                   const std::string& target, int64_t t,
                                   const std::string& event_id) {
  Envelope env;
  env.sender = requester;  // replication rides on the requester's behalf
  env.recipients = {kToAllAircraft};
  env.kind = MsgKind::QueueSync;
  Json entries = Json::array();
  for (const std::string& e : st_.queue.entries) entries.push_back(e);
  env.payload = Json{{"op", op},
                     {"target", target},
                     {"accepted", true},
                     {"version", st_.queue.version},
                     {"entries", std::move(entries)}};
  if (!event_id.empty()) env.payload["event"] = event_id;
  send_draft(std::move(env), t);
}

void Engine::grant_takeoffs(int64_t t) {
  while (!st_.pending_departures.empty()) {
    if (t < st_.departures_hold_until) break;
    const PendingDeparture& pd = st_.pending_departures.front();
    if (pd.ready_at > t) break;
    if (claim_runway(st_.runways, sc_.airspace, takeoff_runway_, pd.id, t,
                     pd.duration_s) != ClaimResult::Granted) {
      break;
    }
    AircraftAgent a;
    a.id = pd.id;
    a.kind = AircraftKind::Departure;
    a.phase = FlightPhase::OnRunway;
    a.entered_at = t;
    a.phase_entered_at = t;
    a.phase_deadline = t + pd.duration_s;
    a.fuel_remaining_min = sc_.ops.initial_fuel_min;
    a.local_queue.capacity = sc_.airspace.queue_capacity;
    a.entry_gate = static_cast<int>(st_.takeoffs % 8);
    a.granted_onrunway_s = pd.duration_s;
    st_.takeoffs += 1;
    log_.emit(t, "takeoff", pd.id, Json{{"runway", takeoff_runway_}});
    log_.emit(t, "runway_grant", takeoff_runway_,
              Json{{"flight", pd.id},
                   {"kind", "takeoff"},
                   {"from", t},
                   {"until", t + pd.duration_s}});
    st_.agents.emplace(pd.id, std::move(a));
    st_.pending_departures.pop_front();
  }
}

void Engine::remove_finished(int64_t t) {
  std::vector<std::string> gone;
  for (const auto& [id, a] : st_.agents) {
    if (a.kind == AircraftKind::Arrival) {
      if (a.phase == FlightPhase::Departed || a.phase == FlightPhase::Diverted) {
        gone.push_back(id);
      }
    } else if (a.phase == FlightPhase::Departed && t >= a.phase_deadline) {
      gone.push_back(id);
    }
  }
  for (const std::string& id : gone) {
    const AircraftAgent& a = st_.agents.at(id);
    const char* reason = a.phase == FlightPhase::Diverted
                             ? "diverted"
                             : (a.kind == AircraftKind::Arrival
                                    ? "landed"
                                    : "climbout_complete");
    log_.emit(t, "exit", id, Json{{"kind", to_string(a.kind)}, {"reason", reason}});
    if (a.kind == AircraftKind::Arrival) {
      st_.arrival_exits += 1;
    } else {
      st_.departure_exits += 1;
    }
    if (st_.queue.contains(id)) {
      // Residue of a removal whose every retry was lost; the sequencer
      // purges it so the head can never point at a vanished flight.
      queue_remove(st_.queue, id);
      log_.emit(t, "queue_op", id,
                Json{{"op", "purge"},
                     {"accepted", true},
                     {"version", st_.queue.version},
                     {"size", st_.queue.size()},
                     {"sender", id}});
      broadcast_queue_state(id, "purge", id, t, "");
    }
    st_.agents.erase(id);
    issued_gate_.erase(id);
    issued_path_.erase(id);
    issued_runway_.erase(id);
  }
}

void Engine::issue_clearances(int64_t t) {
  // Directory sweep plus external records due now.
  ScanResult scan = inprocess_scan(
      st_.agents, st_.registry, due_external_, sc_.airspace.radius_nm,
      sc_.airspace.holding.base_altitude_ft, sc_.airspace.holding.band_width_ft,
      t);
  for (const std::string& id : scan.registered) {
    log_.emit(t, "df_register", id, Json::object());
  }
  for (const std::string& id : scan.deregistered) {
    log_.emit(t, "df_deregister", id, Json::object());
  }
  for (Envelope& env : scan.external_inputs) send_draft(std::move(env), t);

  auto send_clearance = [&](const std::string& flight, const char* grant) {
    Envelope env;
    env.sender = kInterfacingId;
    env.recipients = {flight};
    env.kind = MsgKind::Clearance;
    env.payload = Json{{"grant", grant}, {"flight", flight}};
    send_draft(std::move(env), t);
  };

  // Entry gates: a fixed number of simultaneous occupants, first come first
  // served among admitted arrivals still outside.
  int gates_busy = 0;
  std::vector<std::pair<int64_t, std::string>> gate_candidates;
  for (const auto& [id, a] : st_.agents) {
    if (a.kind != AircraftKind::Arrival || !a.alive) continue;
    if (a.phase == FlightPhase::AtEntryGate) {
      gates_busy += 1;
    } else if (a.phase == FlightPhase::ArrivalIntoAirspace) {
      auto it = issued_gate_.find(id);
      if (it != issued_gate_.end()) {
        gates_busy += 1;  // slot reserved while the clearance is in flight
        if (!a.gate_clearance && t - it->second >= 10) {
          send_clearance(id, "gate");
          it->second = t;
        }
      } else if (st_.queue.contains(id)) {
        gate_candidates.emplace_back(a.entered_at, id);
      }
    }
  }
  std::sort(gate_candidates.begin(), gate_candidates.end());
  for (const auto& [when, id] : gate_candidates) {
    if (gates_busy >= sc_.airspace.entry_gates) break;
    send_clearance(id, "gate");
    issued_gate_[id] = t;
    gates_busy += 1;
  }

  // Path clearances: issued just before the gate dwell expires.
  for (const auto& [id, a] : st_.agents) {
    if (a.kind != AircraftKind::Arrival || !a.alive) continue;
    if (a.phase != FlightPhase::AtEntryGate || a.path_clearance) continue;
    if (t < a.phase_deadline - 1) continue;
    auto it = issued_path_.find(id);
    if (it == issued_path_.end()) {
      send_clearance(id, "path");
      issued_path_[id] = t;
    } else if (t - it->second >= 10) {
      send_clearance(id, "path");
      it->second = t;
    }
  }

  // Descent admission: strictly the queue head, and only while the descent
  // pipeline has room. Issued early enough that a flight finishing its path
  // leg need not blip through the holding stack.
  if (pipeline_usage() < sc_.ops.pipeline_cap && !st_.queue.entries.empty()) {
    const std::string& head = st_.queue.entries.front();
    auto it = st_.agents.find(head);
    if (it != st_.agents.end() && it->second.alive) {
      const AircraftAgent& h = it->second;
      bool ripe = h.phase == FlightPhase::HoldingPattern ||
                  (h.phase == FlightPhase::OnPath && h.phase_deadline <= t + 2);
      if (ripe && !h.runway_clearance) {
        auto ic = issued_runway_.find(head);
        if (ic == issued_runway_.end()) {
          send_clearance(head, "runway_free");
          issued_runway_[head] = t;
        } else if (t - ic->second >= 10) {
          send_clearance(head, "runway_free");
          ic->second = t;
        }
      }
    }
  }
}

void Engine::supervisor_phase(int64_t t) {
  if (st_.atc.alive && t % sc_.timeouts.heartbeat_s == 0) {
    Envelope hb;
    hb.sender = kAtcId;
    hb.recipients = {kTraconId};
    hb.kind = MsgKind::Heartbeat;
    hb.payload = Json{{"role", "supervision"}};
    send_draft(std::move(hb), t);
  }

  if (st_.tracon.alive) {
    FailoverDecision d = tracon_failover(st_.tracon, st_.active, t,
                                         sc_.timeouts.failover_timeout_s);
    if (d.failover) {
      log_.emit(t, "failover", kTraconId,
                Json{{"gap_s", t - st_.tracon.last_heartbeat_seen}});
    }
    if (d.failback) {
      log_.emit(t, "failback", kAtcId, Json::object());
    }
  }
  if (!st_.atc.alive && !st_.tracon.alive) {
    st_.supervision_gap_count += 1;
    log_.emit(t, "supervision_gap", "-", Json::object());
  }

  SupervisorState& act =
      st_.active == SupervisorRole::Atc ? st_.atc : st_.tracon;
  if (act.alive) {
    std::vector<EscalationTicket> due;
    due.reserve(act.pending_escalations.size());
    for (const auto& [eid, ticket] : act.pending_escalations) {
      due.push_back(ticket);
    }
    for (const EscalationTicket& ticket : due) {
      Envelope env;
      env.sender = to_string(st_.active);
      env.recipients = {ticket.flight};
      env.kind = MsgKind::Resolution;
      env.payload = Json{{"event", ticket.event_id},
                         {"role", "directive"},
                         {"policy", ticket.policy},
                         {"flight", ticket.flight}};
      send_draft(std::move(env), t);
      act.pending_escalations.erase(ticket.event_id);
      act.answered_escalations.insert(ticket.event_id);
    }
  }

  if (st_.tracon.alive) {
    for (const std::string& flight : new_arrivals_) {
      send_draft(tracon_entry_notify(flight, t, to_string(st_.active)), t);
    }
  }
}

void Engine::check_invariants(int64_t t) {
  std::vector<std::string> problems;

  // Queue: unique alive arrivals, within capacity, in pre-landing phases.
  {
    std::set<std::string> seen;
    for (const std::string& id : st_.queue.entries) {
      if (!seen.insert(id).second) problems.push_back("queue duplicate " + id);
      auto it = st_.agents.find(id);
      if (it == st_.agents.end() || !it->second.alive) {
        problems.push_back("queue member gone " + id);
      } else if (it->second.kind != AircraftKind::Arrival) {
        problems.push_back("queue member not an arrival " + id);
      } else if (!is_queueable_phase(it->second.phase)) {
        problems.push_back("queue member past sequencing " + id);
      }
    }
    if (st_.queue.size() > st_.queue.capacity) {
      problems.push_back("queue over capacity");
    }
  }

  // Stack: levels non-empty, leaders are members, members are queued holders,
  // and the base-level leader is the queue-earliest holder.
  {
    int counted = 0;
    for (size_t li = 0; li < st_.stack.levels.size(); ++li) {
      const HoldingLevel& level = st_.stack.levels[li];
      if (level.members.empty()) {
        problems.push_back("empty stack level " + std::to_string(li));
        continue;
      }
      if (std::find(level.members.begin(), level.members.end(),
                    level.leader) == level.members.end()) {
        problems.push_back("leaderless stack level " + std::to_string(li));
      }
      for (const std::string& id : level.members) {
        counted += 1;
        auto it = st_.agents.find(id);
        if (it == st_.agents.end() || !it->second.alive ||
            it->second.phase != FlightPhase::HoldingPattern) {
          problems.push_back("stack member not holding " + id);
        }
        if (!st_.queue.contains(id)) {
          problems.push_back("stack member not queued " + id);
        }
      }
    }
    int holders = 0;
    for (const auto& [id, a] : st_.agents) {
      if (a.alive && a.phase == FlightPhase::HoldingPattern) {
        holders += 1;
        if (!st_.stack.contains(id)) {
          problems.push_back("holder outside stack " + id);
        }
      }
    }
    if (holders != counted) problems.push_back("stack membership mismatch");
    if (!st_.stack.levels.empty()) {
      int best = st_.queue.capacity + 1;
      std::string earliest;
      for (const auto& level : st_.stack.levels) {
        for (const std::string& id : level.members) {
          auto idx = st_.queue.index_of(id);
          if (idx && *idx < best) {
            best = *idx;
            earliest = id;
          }
        }
      }
      if (!earliest.empty() && st_.stack.levels[0].leader != earliest) {
        problems.push_back("base leader is not queue-earliest holder");
      }
    }
  }

  // Directory mirrors the live agent table.
  {
    int alive = 0;
    for (const auto& [id, a] : st_.agents) {
      if (!a.alive) continue;
      alive += 1;
      if (!st_.registry.contains(id)) {
        problems.push_back("unregistered agent " + id);
      }
    }
    if (static_cast<int>(st_.registry.size()) != alive) {
      problems.push_back("directory size mismatch");
    }
  }

  // Crossing runways are never simultaneously occupied.
  for (const RunwayConfig& rc : sc_.airspace.runways) {
    const RunwayOcc& rw = st_.runways.at(rc.id);
    if (rw.occupied_until <= t) continue;
    for (const std::string& cross : rc.crosses) {
      auto ci = st_.runways.find(cross);
      if (ci != st_.runways.end() && ci->second.occupied_until > t) {
        problems.push_back("crossing overlap " + rc.id + "/" + cross);
      }
    }
  }

  // Conservation: every flight that entered is accounted for.
  {
    int live_arr = 0, live_dep = 0;
    for (const auto& [id, a] : st_.agents) {
      if (!a.alive) continue;
      (a.kind == AircraftKind::Arrival ? live_arr : live_dep) += 1;
    }
    if (st_.arrivals_entered != st_.arrival_exits + live_arr) {
      problems.push_back("arrival conservation broken");
    }
    if (st_.takeoffs != st_.departure_exits + live_dep) {
      problems.push_back("departure conservation broken");
    }
    if (st_.departures_ready !=
        st_.takeoffs + static_cast<int64_t>(st_.pending_departures.size())) {
      problems.push_back("departure intake broken");
    }
  }

  // Starvation bound, checked only when no disturbance can stall service.
  bool quiet = sc_.causes.weather_deviation == 0.0 &&
               sc_.causes.medical_priority == 0.0 &&
               sc_.causes.fuel_critical == 0.0 &&
               sc_.causes.equipment_fault == 0.0 &&
               sc_.causes.runway_blockage == 0.0;
  if (quiet) {
    int64_t bound = int64_t{60} * sc_.ops.starvation_bound_min;
    for (const auto& [id, a] : st_.agents) {
      if (a.alive && a.kind == AircraftKind::Arrival &&
          t - a.entered_at > bound) {
        problems.push_back("starved arrival " + id);
      }
    }
  }

  for (const std::string& p : problems) {
    if (sc_.strict_mode) {
      throw SimError(Err::InvariantViolation,
                     "t=" + std::to_string(t) + ": " + p);
    }
    fault(t, "invariant", Json{{"what", p}});
  }
}

// ---------------------------------------------------------------------------
// Shared helpers

void Engine::enter_phase(AircraftAgent& a, FlightPhase to, int64_t t) {
  FlightPhase from = a.phase;
  if (from == FlightPhase::OnPath && a.corridor >= 0) {
    st_.corridor_busy_until[static_cast<size_t>(a.corridor)] = t;
    a.corridor = -1;
  }
  if (from == FlightPhase::HoldingPattern && to != FlightPhase::HoldingPattern) {
    a.next_heartbeat_at = -1;
  }
  a.phase = to;
  a.phase_entered_at = t;
  int64_t dur = phase_duration(a, to);
  a.phase_deadline = dur > 0 ? t + dur : 0;
  log_.emit(t, "phase", a.id,
            Json{{"from", to_string(from)}, {"to", to_string(to)}});
}

int64_t Engine::phase_duration(const AircraftAgent& a, FlightPhase p) {
  const PhaseDurations& d = sc_.traffic.durations;
  switch (p) {
    case FlightPhase::AtEntryGate:
      return jittered(d.at_entry_gate_s);
    case FlightPhase::OnPath:
      return jittered(d.on_path_s);
    case FlightPhase::ToMeteringFix:
      return jittered(d.to_metering_fix_s);
    case FlightPhase::AtMeteringFix:
      return jittered(d.at_metering_fix_s);
    case FlightPhase::FinalDescent:
      return jittered(d.final_descent_s);
    case FlightPhase::OnRunway:
      return a.granted_onrunway_s > 0 ? a.granted_onrunway_s
                                      : jittered(d.on_runway_s);
    case FlightPhase::Backtrack:
      return a.granted_backtrack_s > 0 ? a.granted_backtrack_s
                                       : jittered(d.backtrack_s);
    case FlightPhase::Departed:
      return a.kind == AircraftKind::Departure ? sc_.ops.climbout_s : 0;
    default:
      return 0;
  }
}

int64_t Engine::jittered(int nominal_s) {
  double j = sc_.traffic.jitter_frac;
  if (j <= 0.0) return std::max<int64_t>(1, nominal_s);
  double f = rng_jitter_.uniform(-j, j);
  auto v = static_cast<int64_t>(std::llround(nominal_s * (1.0 + f)));
  return std::max<int64_t>(1, v);
}

void Engine::send_draft(Envelope env, int64_t t) {
  env.sent_at = t;
  env.recipients = resolve_recipients(env);
  if (env.recipients.empty()) return;
  MsgKind kind = env.kind;
  std::string sender = env.sender;
  std::vector<std::string> shown = env.recipients;

  auto addressed = [&](const char* sup) {
    return std::find(shown.begin(), shown.end(), sup) != shown.end();
  };
  std::vector<std::string> taps;
  if (st_.atc.alive && sender != kAtcId && !addressed(kAtcId)) {
    taps.push_back(kAtcId);
  }
  if (st_.tracon.alive && sender != kTraconId && !addressed(kTraconId)) {
    taps.push_back(kTraconId);
  }

  SendRecord rec = st_.bus.send(std::move(env), sc_.network, rng_network_, taps);
  log_.emit(t, "msg_send", rec.msg_id,
            Json{{"kind", to_string(kind)}, {"sender", sender}, {"to", shown}});
  for (const std::string& r : rec.dropped) {
    log_.emit(t, "msg_drop", rec.msg_id,
              Json{{"recipient", r}, {"reason", "loss"}});
  }
  for (const Delivery& tap : rec.tap_copies) {
    SupervisorState& sup = tap.recipient == kAtcId ? st_.atc : st_.tracon;
    atc_overhear(sup, tap);
    log_.emit(t, "msg_deliver", rec.msg_id,
              Json{{"recipient", tap.recipient}, {"ch", "tap"}});
  }
}

std::vector<std::string> Engine::resolve_recipients(const Envelope& env) const {
  std::vector<std::string> out;
  for (const std::string& r : env.recipients) {
    if (r == kToAllAircraft) {
      for (const auto& [id, a] : st_.agents) {
        if (a.alive) out.push_back(id);
      }
    } else if (r == kToLeaders) {
      for (const std::string& m :
           current_leader_system(st_.stack, st_.agents).members) {
        if (m != env.sender) out.push_back(m);
      }
    } else if (r == kToSupervisor) {
      out.push_back(to_string(st_.active));
    } else {
      out.push_back(r);
    }
  }
  return out;
}

void Engine::sync_stack_flags() {
  for (auto& [id, a] : st_.agents) {
    if (a.kind != AircraftKind::Arrival) continue;
    if (auto lvl = st_.stack.level_of(id)) {
      a.holding_level = *lvl;
      a.is_leader = st_.stack.levels[static_cast<size_t>(*lvl)].leader == id;
      a.altitude_ft = level_center_ft(st_.stack, *lvl);
    } else {
      a.holding_level.reset();
      a.is_leader = false;
    }
  }
}

int Engine::corridors_free(int64_t t) const {
  int n = 0;
  for (int64_t until : st_.corridor_busy_until) {
    if (until <= t) n += 1;
  }
  return n;
}

int Engine::pipeline_usage() const {
  int used = 0;
  for (const auto& [id, a] : st_.agents) {
    if (a.kind != AircraftKind::Arrival || !a.alive) continue;
    switch (a.phase) {
      case FlightPhase::ToMeteringFix:
      case FlightPhase::AtMeteringFix:
      case FlightPhase::FinalDescent:
        used += 1;
        break;
      case FlightPhase::OnPath:
      case FlightPhase::HoldingPattern:
        if (issued_runway_.count(id)) used += 1;  // slot reserved
        break;
      default:
        break;
    }
  }
  return used;
}

void Engine::fault(int64_t t, const std::string& what, Json detail) {
  st_.fault_count += 1;
  log_.emit(t, "fault", what, std::move(detail));
}

}  // namespace atcsim
