#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "atcsim/rng.hpp"

namespace atcsim {

using Json = nlohmann::ordered_json;

enum class MsgKind {
  QueueSync,
  Heartbeat,
  Handover,
  DisturbanceReport,
  Resolution,
  EntryNotify,
  Relay,
  ExternalInput,
  Escalation,
  Clearance,
};

const char* to_string(MsgKind k);
std::optional<MsgKind> msg_kind_from_string(std::string_view s);

struct Envelope {
  std::string msg_id;  // assigned by the bus at send time
  std::string sender;
  std::vector<std::string> recipients;
  MsgKind kind = MsgKind::Heartbeat;
  Json payload;
  int64_t sent_at = 0;
};

// Simulated link behaviour. Supervision overhearing bypasses this model
// entirely (lossless, zero latency); everything else draws latency per
// delivery and may drop.
struct LinkParams {
  int latency_lo_s = 1;
  int latency_hi_s = 1;
  double loss_prob = 0.0;
};

struct NetworkModel {
  LinkParams air;     // aircraft to aircraft
  LinkParams ground;  // any endpoint on the ground side

  const LinkParams& link_for(bool sender_air, bool recipient_air) const {
    return (sender_air && recipient_air) ? air : ground;
  }
};

struct Delivery {
  int64_t deliver_at = 0;
  std::string msg_id;
  std::string recipient;
  Envelope env;
  bool overheard = false;  // tap copy, not an addressed delivery
};

struct SendRecord {
  std::string msg_id;
  std::vector<std::string> scheduled;  // recipients with a queued delivery
  std::vector<std::string> dropped;    // recipients whose copy was lost
  std::vector<Delivery> tap_copies;    // lossless supervision copies
};

// Tells the bus which endpoints sit on the air side of a link.
using AirSidePredicate = bool (*)(const std::string&);
bool default_air_side(const std::string& id);

// Orders pending deliveries by (deliver_at, msg_id, recipient); ids are
// zero-padded so lexicographic order equals send order.
class MessageBus {
 public:
  explicit MessageBus(AirSidePredicate air_side = default_air_side)
      : air_side_(air_side) {}

  // Schedules one addressed delivery per recipient, drawing loss then
  // latency per recipient in order. Tap copies for the given supervisor ids
  // are produced unconditionally and returned rather than queued; they are
  // due immediately.
  SendRecord send(Envelope env, const NetworkModel& net, RngStream& rng,
                  const std::vector<std::string>& taps);

  // All deliveries due at time t, in deterministic order.
  std::vector<Delivery> deliver_due(int64_t t);

  size_t pending_count() const { return pending_.size(); }
  size_t pending_of_kind(MsgKind k) const;
  uint64_t sent_count() const { return next_seq_ - 1; }

 private:
  AirSidePredicate air_side_;
  uint64_t next_seq_ = 1;
  std::deque<Delivery> pending_;
};

}  // namespace atcsim
