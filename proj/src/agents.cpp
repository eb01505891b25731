#include "atcsim/agents.hpp"

#include <algorithm>
#include <cmath>

#include "atcsim/errors.hpp"

namespace atcsim {

namespace {

double lerp(double a, double b, double p) { return a + (b - a) * p; }

double phase_progress(const AircraftAgent& a, int64_t t) {
  if (a.phase_deadline <= a.phase_entered_at) return 0.0;
  double p = static_cast<double>(t - a.phase_entered_at) /
             static_cast<double>(a.phase_deadline - a.phase_entered_at);
  return std::clamp(p, 0.0, 1.0);
}

void adopt_queue_state(LandingQueue& replica, const Json& payload) {
  uint64_t version = payload.value("version", uint64_t{0});
  if (version <= replica.version) return;  // stale or duplicate copy
  replica.entries.clear();
  for (const auto& e : payload.at("entries")) {
    replica.entries.push_back(e.get<std::string>());
  }
  replica.version = version;
}

}  // namespace

// ---------------------------------------------------------------------------
// Directory facilitator

void df_register(DfRegistry& reg, const std::string& id,
                 const Coordinates& coords, const std::string& state,
                 FlightPhase phase, int64_t t) {
  DfEntry& e = reg.entries[id];
  e.coords = coords;
  e.state = state;
  e.phase = phase;
  e.last_update = t;
}

void df_deregister(DfRegistry& reg, const std::string& id) {
  auto it = reg.entries.find(id);
  if (it == reg.entries.end()) {
    throw SimError(Err::NotFound, "df_deregister: " + id);
  }
  reg.entries.erase(it);
}

// ---------------------------------------------------------------------------
// Supervisors

const char* to_string(SupervisorRole r) {
  return r == SupervisorRole::Atc ? kAtcId : kTraconId;
}

void atc_overhear(SupervisorState& sup, const Delivery& tap) {
  if (!sup.alive) {
    throw SimError(Err::InvariantViolation, "overhear on downed supervisor");
  }
  sup.overheard_log.emplace_back(tap.deliver_at, tap.msg_id);
  const Envelope& env = tap.env;
  switch (env.kind) {
    case MsgKind::QueueSync:
      if (env.payload.value("accepted", false)) {
        adopt_queue_state(sup.mirrored_queue, env.payload);
      }
      break;
    case MsgKind::Escalation: {
      std::string event_id = env.payload.value("event", "");
      if (!sup.answered_escalations.count(event_id)) {
        EscalationTicket ticket;
        ticket.event_id = event_id;
        ticket.flight = env.payload.value("flight", "");
        ticket.policy = env.payload.value("policy", "");
        ticket.seen_at = tap.deliver_at;
        sup.pending_escalations.emplace(event_id, std::move(ticket));
      }
      break;
    }
    case MsgKind::Resolution:
      if (env.payload.value("role", "") == "directive") {
        std::string event_id = env.payload.value("event", "");
        sup.pending_escalations.erase(event_id);
        sup.answered_escalations.insert(event_id);
      }
      break;
    default:
      break;
  }
}

FailoverDecision tracon_failover(SupervisorState& tracon, SupervisorRole& active,
                                 int64_t t, int failover_timeout_s) {
  FailoverDecision d;
  if (!tracon.alive) return d;
  int64_t gap = t - tracon.last_heartbeat_seen;
  if (active == SupervisorRole::Atc && gap > failover_timeout_s) {
    active = SupervisorRole::Tracon;
    d.failover = true;
  } else if (active == SupervisorRole::Tracon && gap <= failover_timeout_s) {
    active = SupervisorRole::Atc;
    d.failback = true;
  }
  return d;
}

Envelope tracon_entry_notify(const std::string& flight, int64_t t,
                             const std::string& active_supervisor) {
  Envelope env;
  env.sender = kTraconId;
  env.recipients = {active_supervisor};
  env.kind = MsgKind::EntryNotify;
  env.payload = Json{{"flight", flight}};
  env.sent_at = t;
  return env;
}

// ---------------------------------------------------------------------------
// Holding-level leaders

LeaderSystem current_leader_system(
    const HoldingStack& stack,
    const std::map<std::string, AircraftAgent>& agents) {
  LeaderSystem ls;
  for (const auto& level : stack.levels) {
    if (!level.leader.empty()) ls.members.push_back(level.leader);
  }
  for (const auto& [id, agent] : agents) {
    if (agent.alive && agent.kind == AircraftKind::Departure &&
        agent.phase == FlightPhase::Departed) {
      ls.members.push_back(id);
    }
  }
  return ls;
}

std::vector<Envelope> leader_relay(const std::string& leader,
                                   const HoldingStack& stack,
                                   const Envelope& origin, int64_t t) {
  const HoldingLevel* level = nullptr;
  for (const auto& l : stack.levels) {
    if (l.leader == leader) level = &l;
  }
  if (!level) throw SimError(Err::NotALeader, "leader_relay: " + leader);
  std::vector<Envelope> out;
  for (const auto& member : level->members) {
    if (member == leader) continue;
    Envelope env;
    env.sender = leader;
    env.recipients = {member};
    env.kind = MsgKind::Relay;
    env.payload = origin.payload;
    env.payload["hop"] = "relay";
    env.payload["origin_msg"] = origin.msg_id;
    env.payload["via"] = leader;
    env.sent_at = t;
    out.push_back(std::move(env));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aircraft behaviour

namespace {

Envelope draft(const AircraftAgent& self, MsgKind kind,
               std::vector<std::string> recipients, Json payload, int64_t t) {
  Envelope env;
  env.sender = self.id;
  env.recipients = std::move(recipients);
  env.kind = kind;
  env.payload = std::move(payload);
  env.sent_at = t;
  return env;
}

Envelope queue_op(const AircraftAgent& self, const std::string& op,
                  int64_t t, const DisturbanceEvent* event = nullptr) {
  Json payload{{"op", op}, {"target", self.id}, {"request", true}};
  if (event) {
    payload["event"] = event->event_id;
    payload["raised_at"] = event->raised_at;
  }
  return draft(self, MsgKind::QueueSync, {kToSequencer}, std::move(payload), t);
}

Envelope escalation_msg(const AircraftAgent& self, const DisturbanceEvent& ev,
                        int64_t t) {
  Json payload{{"event", ev.event_id},
               {"flight", self.id},
               {"cause", to_string(ev.cause)},
               {"policy", to_string(policy_for(ev.cause))},
               {"raised_at", ev.raised_at}};
  return draft(self, MsgKind::Escalation, {kToSupervisor}, std::move(payload), t);
}

bool queue_head_is(const AircraftAgent& self) {
  return !self.local_queue.entries.empty() &&
         self.local_queue.entries.front() == self.id;
}

void handle_inbox(AircraftAgent& me, StepEffects& fx,
                  const std::vector<Delivery>& inbox, const WorldView& view) {
  for (const Delivery& d : inbox) {
    const Envelope& env = d.env;
    switch (env.kind) {
      case MsgKind::QueueSync: {
        std::string op = env.payload.value("op", "");
        std::string target = env.payload.value("target", "");
        if (!env.payload.value("accepted", false)) {
          // Rejections are addressed to the requester alone.
          if (op == "admit" && target == me.id && !me.admitted &&
              env.payload.value("reason", "") == "BufferFull" &&
              me.phase == FlightPhase::ArrivalIntoAirspace) {
            fx.transition = FlightPhase::Diverted;
            break;
          }
          // A nack that carries the authoritative state still syncs the
          // replica: a DuplicateId after a lost acceptance broadcast is the
          // retrying aircraft's only proof that it is already queued.
          if (env.payload.contains("entries")) {
            adopt_queue_state(me.local_queue, env.payload);
            me.queue_index = me.local_queue.index_of(me.id);
            if (me.queue_index) me.admitted = true;
          }
          break;
        }
        adopt_queue_state(me.local_queue, env.payload);
        me.queue_index = me.local_queue.index_of(me.id);
        // Seeing itself in the authoritative queue admits the aircraft even
        // when the broadcast answering its own request was lost.
        if (me.queue_index) me.admitted = true;
        if (op == "admit" && target == me.id) me.admitted = true;
        if (op == "promote" && target == me.id && me.pending_disturbance &&
            env.payload.value("event", "") ==
                me.pending_disturbance->event_id) {
          me.pending_disturbance.reset();
        }
        break;
      }
      case MsgKind::Clearance: {
        std::string grant = env.payload.value("grant", "");
        if (grant == "gate") me.gate_clearance = true;
        if (grant == "path") me.path_clearance = true;
        if (grant == "runway_free") me.runway_clearance = true;
        break;
      }
      case MsgKind::Resolution: {
        if (env.payload.value("role", "") != "directive") break;
        if (!me.pending_disturbance) break;
        if (env.payload.value("event", "") !=
            me.pending_disturbance->event_id) {
          break;
        }
        std::string policy = env.payload.value("policy", "");
        if (policy == "ReRoute") {
          fx.forced_reroute = true;  // engine restarts the path leg
        } else {
          // Resequencing or ground handling taken over out of band; the
          // event is closed on this side.
          me.pending_disturbance.reset();
        }
        break;
      }
      case MsgKind::Relay: {
        if (env.payload.value("hop", "") != "origin") break;
        if (!me.is_leader || !me.holding_level || !view.stack) break;
        auto relays = leader_relay(me.id, *view.stack, env, view.t);
        for (auto& r : relays) fx.messages.push_back(std::move(r));
        break;
      }
      case MsgKind::ExternalInput: {
        if (env.payload.value("source", "") == "fms" &&
            env.payload.value("directive", "") == "route_amendment" &&
            me.phase == FlightPhase::OnPath) {
          fx.forced_reroute = true;
        }
        break;
      }
      default:
        break;
    }
  }
}

void handle_disturbance(AircraftAgent& me, StepEffects& fx,
                        const WorldView& view) {
  if (!me.pending_disturbance) return;
  DisturbanceEvent& ev = *me.pending_disturbance;
  int64_t t = view.t;

  if (ev.outcome == DisturbanceOutcome::Escalated) {
    // Re-raise occasionally so a lossy link cannot orphan the event.
    if (t > ev.raised_at && (t - ev.raised_at) % 60 == 0) {
      fx.messages.push_back(escalation_msg(me, ev, t));
    }
    return;
  }

  if (!ev.report_sent) {
    Json payload{{"event", ev.event_id},
                 {"flight", me.id},
                 {"cause", to_string(ev.cause)},
                 {"target", ev.target},
                 {"raised_at", ev.raised_at}};
    fx.messages.push_back(draft(me, MsgKind::DisturbanceReport,
                                {kToSupervisor}, std::move(payload), t));
    ev.report_sent = true;
  }

  ResolutionPlan plan =
      resolve(ev, me, me.local_queue, *view.stack, view.corridors_free);
  if (plan.applicable) {
    switch (plan.policy) {
      case ResolutionPolicy::ReSequence:
        if (ev.action_sent_at < 0 || t - ev.action_sent_at >= 30) {
          fx.messages.push_back(queue_op(me, "promote", t, &ev));
          ev.action_sent_at = t;
        }
        break;
      case ResolutionPolicy::ReRoute:
        fx.wants_reroute = true;
        break;
      case ResolutionPolicy::GroundDelay:
        fx.wants_ground_delay = true;
        break;
    }
    return;
  }
  if (plan.structural_miss ||
      t - ev.raised_at > view.escalation_deadline_s) {
    ev.outcome = DisturbanceOutcome::Escalated;
    fx.escalated = true;
    fx.messages.push_back(escalation_msg(me, ev, t));
  }
  // Otherwise the miss is transient (no corridor yet): wait it out.
}

void emit_leave_queue(AircraftAgent& me, StepEffects& fx, int64_t t) {
  if (!me.local_queue.contains(me.id)) return;
  if (me.leave_queue_sent_at >= 0 && t - me.leave_queue_sent_at < 30) return;
  fx.messages.push_back(queue_op(me, "remove", t));
  me.leave_queue_sent_at = t;
  me.leave_queue_sent = true;
}

void decide_phase(AircraftAgent& me, StepEffects& fx, const WorldView& view) {
  int64_t t = view.t;
  switch (me.phase) {
    case FlightPhase::ArrivalIntoAirspace: {
      bool retry = me.admit_requested && !me.admitted &&
                   t - me.admit_requested_at >= 30;
      if (!me.admit_requested || retry) {
        fx.messages.push_back(queue_op(me, "admit", t));
        me.admit_requested = true;
        me.admit_requested_at = t;
      }
      if (me.admitted && me.gate_clearance && !fx.transition) {
        fx.transition = FlightPhase::AtEntryGate;
      }
      break;
    }
    case FlightPhase::AtEntryGate:
      if (t >= me.phase_deadline && me.path_clearance) {
        fx.transition = FlightPhase::OnPath;
      }
      break;
    case FlightPhase::OnPath:
      if (t >= me.phase_deadline) {
        if (me.runway_clearance && queue_head_is(me)) {
          fx.transition = FlightPhase::ToMeteringFix;
        } else {
          fx.transition = FlightPhase::HoldingPattern;
        }
      }
      break;
    case FlightPhase::HoldingPattern:
      if (me.next_heartbeat_at >= 0 && t >= me.next_heartbeat_at) {
        Json payload{{"level", me.holding_level ? *me.holding_level : -1},
                     {"leader", me.is_leader}};
        std::vector<std::string> to;
        if (view.stack && me.holding_level &&
            *me.holding_level < static_cast<int>(view.stack->levels.size())) {
          const auto& leader = view.stack->levels[*me.holding_level].leader;
          if (!leader.empty() && leader != me.id) to.push_back(leader);
        }
        if (to.empty()) to.push_back(kToSupervisor);
        fx.messages.push_back(
            draft(me, MsgKind::Heartbeat, std::move(to), std::move(payload), t));
        me.next_heartbeat_at = t + view.holding_lap_s;
      }
      if (me.runway_clearance && me.is_leader && me.holding_level &&
          *me.holding_level == 0 && queue_head_is(me)) {
        fx.transition = FlightPhase::ToMeteringFix;
      }
      break;
    case FlightPhase::ToMeteringFix:
      emit_leave_queue(me, fx, t);
      if (t >= me.phase_deadline) fx.transition = FlightPhase::AtMeteringFix;
      break;
    case FlightPhase::AtMeteringFix:
      emit_leave_queue(me, fx, t);
      if (t >= me.phase_deadline) fx.transition = FlightPhase::FinalDescent;
      break;
    case FlightPhase::FinalDescent:
      if (t >= me.phase_deadline) fx.transition = FlightPhase::OnRunway;
      break;
    case FlightPhase::OnRunway:
      if (me.kind == AircraftKind::Departure && !me.takeoff_info_sent) {
        Json payload{{"info", "takeoff"},
                     {"flight", me.id},
                     {"hop", "origin"}};
        fx.messages.push_back(
            draft(me, MsgKind::Relay, {kToLeaders}, std::move(payload), t));
        me.takeoff_info_sent = true;
      }
      if (t >= me.phase_deadline) {
        fx.transition = me.kind == AircraftKind::Arrival
                            ? FlightPhase::Backtrack
                            : FlightPhase::Departed;
      }
      break;
    case FlightPhase::Backtrack:
      if (t >= me.phase_deadline) fx.transition = FlightPhase::Departed;
      break;
    case FlightPhase::Departed:
    case FlightPhase::Diverted:
      break;
  }
}

}  // namespace

StepEffects aircraft_step(const AircraftAgent& self,
                          const std::vector<Delivery>& inbox,
                          const WorldView& view) {
  StepEffects fx;
  fx.updated = self;
  AircraftAgent& me = fx.updated;

  handle_inbox(me, fx, inbox, view);
  if (fx.transition == FlightPhase::Diverted) return fx;
  if (me.phase == FlightPhase::Diverted) return fx;

  handle_disturbance(me, fx, view);
  decide_phase(me, fx, view);
  return fx;
}

// ---------------------------------------------------------------------------
// Interfacing agent

const char* to_string(AircraftKind k) {
  return k == AircraftKind::Arrival ? "arrival" : "departure";
}

Coordinates synth_coordinates(const AircraftAgent& a, double radius_nm,
                              double holding_base_ft, double holding_band_ft,
                              int64_t t) {
  (void)holding_base_ft;
  (void)holding_band_ft;
  Coordinates c;
  double p = phase_progress(a, t);
  c.bearing_deg = static_cast<double>((a.entry_gate * 45) % 360);
  switch (a.phase) {
    case FlightPhase::ArrivalIntoAirspace:
      c.range_nm = radius_nm;
      c.altitude_ft = 12000.0;
      break;
    case FlightPhase::AtEntryGate:
      c.range_nm = radius_nm * 0.85;
      c.altitude_ft = 10000.0;
      break;
    case FlightPhase::OnPath:
      c.range_nm = lerp(radius_nm * 0.85, 15.0, p);
      c.altitude_ft = lerp(10000.0, 8000.0, p);
      break;
    case FlightPhase::HoldingPattern:
      c.range_nm = 12.0;
      c.altitude_ft = a.altitude_ft;
      break;
    case FlightPhase::ToMeteringFix:
      c.range_nm = lerp(12.0, 8.0, p);
      c.altitude_ft = lerp(7500.0, 4000.0, p);
      break;
    case FlightPhase::AtMeteringFix:
      c.range_nm = 8.0;
      c.altitude_ft = 3500.0;
      break;
    case FlightPhase::FinalDescent:
      c.range_nm = lerp(8.0, 0.0, p);
      c.altitude_ft = lerp(3000.0, 0.0, p);
      break;
    case FlightPhase::OnRunway:
    case FlightPhase::Backtrack:
      c.range_nm = 0.0;
      c.altitude_ft = 0.0;
      break;
    case FlightPhase::Departed:
      c.bearing_deg = static_cast<double>((a.entry_gate * 45 + 180) % 360);
      c.range_nm = lerp(0.0, radius_nm, p);
      c.altitude_ft = lerp(0.0, 12000.0, p);
      break;
    case FlightPhase::Diverted:
      c.range_nm = radius_nm;
      c.altitude_ft = 10000.0;
      break;
  }
  return c;
}

ScanResult inprocess_scan(const std::map<std::string, AircraftAgent>& agents,
                          DfRegistry& reg,
                          const std::vector<ScriptedRecord>& due,
                          double radius_nm, double holding_base_ft,
                          double holding_band_ft, int64_t t) {
  ScanResult out;
  for (const auto& [id, agent] : agents) {
    if (!agent.alive) continue;
    bool fresh = !reg.contains(id);
    df_register(reg, id,
                synth_coordinates(agent, radius_nm, holding_base_ft,
                                  holding_band_ft, t),
                to_string(agent.kind), agent.phase, t);
    if (fresh) out.registered.push_back(id);
  }
  std::vector<std::string> stale;
  for (const auto& [id, entry] : reg.entries) {
    auto it = agents.find(id);
    if (it == agents.end() || !it->second.alive) stale.push_back(id);
  }
  for (const auto& id : stale) {
    df_deregister(reg, id);
    out.deregistered.push_back(id);
  }

  for (const ScriptedRecord& rec : due) {
    Envelope env;
    env.sender = kInterfacingId;
    env.sent_at = t;
    env.kind = MsgKind::ExternalInput;
    if (rec.kind == "fms_route_amendment") {
      if (!rec.payload.contains("flight") || !rec.payload["flight"].is_string()) {
        throw SimError(Err::MalformedExternalRecord,
                       "fms_route_amendment needs a flight id");
      }
      env.recipients = {rec.payload["flight"].get<std::string>()};
      env.payload = Json{{"source", "fms"}, {"directive", "route_amendment"}};
    } else if (rec.kind == "uret_advisory" || rec.kind == "smr_status") {
      env.recipients = {kToSupervisor};
      env.payload = Json{
          {"source", rec.kind == "uret_advisory" ? "uret" : "smr"},
          {"note", rec.payload.value("note", "")}};
    } else {
      throw SimError(Err::MalformedExternalRecord,
                     "unknown external record kind: " + rec.kind);
    }
    out.external_inputs.push_back(std::move(env));
  }
  return out;
}

}  // namespace atcsim
