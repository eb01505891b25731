#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atcsim/queue.hpp"

namespace atcsim {

// One altitude band of the holding stack. Members are kept in landing-queue
// order; the leader is always the queue-earliest member.
struct HoldingLevel {
  std::vector<std::string> members;
  std::string leader;
};

// Altitude-banded holding stack over an entry gate. Level 0 is the lowest
// band. Every mutation packs the member set back into consecutive
// queue-order chunks of level_capacity, which models holders descending
// whenever a slot frees below them and anchors the stack head invariant:
// the level-0 leader is always the queue-earliest holder.
struct HoldingStack {
  std::vector<HoldingLevel> levels;
  double base_altitude_ft = 7000.0;
  double band_width_ft = 1000.0;
  int level_capacity = 3;

  std::optional<int> level_of(const std::string& id) const;
  bool contains(const std::string& id) const { return level_of(id).has_value(); }
  bool is_leader(const std::string& id) const;
  int total_members() const;
};

// Midpoint altitude of a level's band.
double level_center_ft(const HoldingStack& s, int level);

struct HoldingAltitude {
  std::string id;
  double altitude_ft;
};

// Buckets aircraft into bands by reported altitude: level k covers
// [base + k*band, base + (k+1)*band). Within each band, members are ordered
// and led by landing-queue position. Throws AltitudeOutOfRange for a report
// below base or at/above ceiling_ft. Levels between occupied bands may be
// empty (no members, no leader).
HoldingStack group_levels(const std::vector<HoldingAltitude>& reports,
                          const LandingQueue& order, double base_altitude_ft,
                          double band_width_ft, double ceiling_ft);

// Inserts id and repacks. An aircraft queue-earlier than existing holders
// lands in level 0 and pushes the chunk boundaries up; a queue-later one
// joins the first level with room. Returns the level joined. Also records
// level_capacity on the stack for later repacks.
int stack_insert(HoldingStack& s, const std::string& id,
                 const LandingQueue& order, int level_capacity);

// Removes id and repacks: holders above a freed slot descend to fill it,
// emptied levels disappear, leaders are recomputed.
void stack_remove(HoldingStack& s, const std::string& id,
                  const LandingQueue& order);

// Leadership handover when a level leader departs the stack. Throws
// NotALeader if the departing aircraft does not lead its level; otherwise
// removes it, repacking as stack_remove does.
void handover_leadership(HoldingStack& s, const std::string& departing,
                         const LandingQueue& order);

// Repacks against the current queue order. Called after queue mutations
// that can reorder holders (promotion to head).
void stack_resync_order(HoldingStack& s, const LandingQueue& order);

}  // namespace atcsim
