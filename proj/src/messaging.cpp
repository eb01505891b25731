#include "atcsim/messaging.hpp"

#include <algorithm>
#include <cstdio>

namespace atcsim {

const char* to_string(MsgKind k) {
  switch (k) {
    case MsgKind::QueueSync: return "QueueSync";
    case MsgKind::Heartbeat: return "Heartbeat";
    case MsgKind::Handover: return "Handover";
    case MsgKind::DisturbanceReport: return "DisturbanceReport";
    case MsgKind::Resolution: return "Resolution";
    case MsgKind::EntryNotify: return "EntryNotify";
    case MsgKind::Relay: return "Relay";
    case MsgKind::ExternalInput: return "ExternalInput";
    case MsgKind::Escalation: return "Escalation";
    case MsgKind::Clearance: return "Clearance";
  }
  return "?";
}

std::optional<MsgKind> msg_kind_from_string(std::string_view s) {
  static constexpr MsgKind kinds[] = {
      MsgKind::QueueSync,   MsgKind::Heartbeat,   MsgKind::Handover,
      MsgKind::DisturbanceReport, MsgKind::Resolution, MsgKind::EntryNotify,
      MsgKind::Relay,       MsgKind::ExternalInput, MsgKind::Escalation,
      MsgKind::Clearance,
  };
  for (MsgKind k : kinds) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

bool default_air_side(const std::string& id) {
  // Aircraft ids carry an AR/DP prefix; supervisors and the interfacing
  // agent are ground stations.
  return id.size() > 2 && (id[0] == 'A' || id[0] == 'D') &&
         (id.rfind("AR", 0) == 0 || id.rfind("DP", 0) == 0);
}

SendRecord MessageBus::send(Envelope env, const NetworkModel& net,
                            RngStream& rng,
                            const std::vector<std::string>& taps) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "M%07llu",
                static_cast<unsigned long long>(next_seq_++));
  env.msg_id = buf;

  SendRecord rec;
  rec.msg_id = env.msg_id;
  bool sender_air = air_side_(env.sender);
  for (const auto& recipient : env.recipients) {
    const LinkParams& link = net.link_for(sender_air, air_side_(recipient));
    if (link.loss_prob > 0.0 && rng.bernoulli(link.loss_prob)) {
      rec.dropped.push_back(recipient);
      continue;
    }
    int latency = link.latency_lo_s;
    if (link.latency_hi_s > link.latency_lo_s) {
      latency = static_cast<int>(
          rng.uniform_int(link.latency_lo_s, link.latency_hi_s));
    }
    Delivery d;
    d.deliver_at = env.sent_at + latency;
    d.msg_id = env.msg_id;
    d.recipient = recipient;
    d.env = env;
    pending_.push_back(std::move(d));
    rec.scheduled.push_back(recipient);
  }
  for (const auto& tap : taps) {
    Delivery d;
    d.deliver_at = env.sent_at;
    d.msg_id = env.msg_id;
    d.recipient = tap;
    d.env = env;
    d.overheard = true;
    rec.tap_copies.push_back(std::move(d));
  }
  return rec;
}

std::vector<Delivery> MessageBus::deliver_due(int64_t t) {
  std::vector<Delivery> due;
  auto keep = pending_.begin();
  for (auto it = pending_.begin(); it != pending_.end(); ++it) {
    if (it->deliver_at <= t) {
      due.push_back(std::move(*it));
    } else {
      if (keep != it) *keep = std::move(*it);
      ++keep;
    }
  }
  pending_.erase(keep, pending_.end());
  std::sort(due.begin(), due.end(), [](const Delivery& a, const Delivery& b) {
    if (a.deliver_at != b.deliver_at) return a.deliver_at < b.deliver_at;
    if (a.msg_id != b.msg_id) return a.msg_id < b.msg_id;
    return a.recipient < b.recipient;
  });
  return due;
}

size_t MessageBus::pending_of_kind(MsgKind k) const {
  size_t n = 0;
  for (const auto& d : pending_) {
    if (d.env.kind == k) ++n;
  }
  return n;
}

}  // namespace atcsim
