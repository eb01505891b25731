#include "atcsim/stack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "atcsim/errors.hpp"

namespace atcsim {

namespace {

// Queue position for ordering inside a level. Ids missing from the queue
// sort last, by id, so the stack stays well defined even mid-resequence.
long queue_rank(const LandingQueue& order, const std::string& id) {
  auto idx = order.index_of(id);
  return idx ? *idx : std::numeric_limits<long>::max();
}

void sort_level(HoldingLevel& level, const LandingQueue& order) {
  std::sort(level.members.begin(), level.members.end(),
            [&](const std::string& a, const std::string& b) {
              long ra = queue_rank(order, a);
              long rb = queue_rank(order, b);
              if (ra != rb) return ra < rb;
              return a < b;
            });
  level.leader = level.members.empty() ? std::string() : level.members.front();
}

// Rebuilds the stack as consecutive queue-order chunks of its member set:
// the earliest level_capacity holders occupy level 0, the next chunk level 1,
// and so on. This is what the physical behaviour converges to anyway (every
// holder descends whenever a slot below is free) and it keeps the anchor
// invariant - the level-0 leader is the queue-earliest holder - true by
// construction, even across out-of-order admissions and promotions.
void repack(HoldingStack& s, const LandingQueue& order) {
  std::vector<std::string> all;
  for (const auto& level : s.levels) {
    all.insert(all.end(), level.members.begin(), level.members.end());
  }
  std::sort(all.begin(), all.end(),
            [&](const std::string& a, const std::string& b) {
              long ra = queue_rank(order, a);
              long rb = queue_rank(order, b);
              if (ra != rb) return ra < rb;
              return a < b;
            });
  int cap = std::max(1, s.level_capacity);
  s.levels.clear();
  for (size_t i = 0; i < all.size(); i += static_cast<size_t>(cap)) {
    HoldingLevel level;
    size_t end = std::min(all.size(), i + static_cast<size_t>(cap));
    level.members.assign(all.begin() + static_cast<long>(i),
                         all.begin() + static_cast<long>(end));
    level.leader = level.members.front();
    s.levels.push_back(std::move(level));
  }
}

}  // namespace

std::optional<int> HoldingStack::level_of(const std::string& id) const {
  for (size_t i = 0; i < levels.size(); ++i) {
    const auto& m = levels[i].members;
    if (std::find(m.begin(), m.end(), id) != m.end()) {
      return static_cast<int>(i);
    }
  }
  return std::nullopt;
}

bool HoldingStack::is_leader(const std::string& id) const {
  for (const auto& level : levels) {
    if (level.leader == id) return true;
  }
  return false;
}

int HoldingStack::total_members() const {
  int n = 0;
  for (const auto& level : levels) n += static_cast<int>(level.members.size());
  return n;
}

double level_center_ft(const HoldingStack& s, int level) {
  return s.base_altitude_ft + level * s.band_width_ft + s.band_width_ft / 2.0;
}

HoldingStack group_levels(const std::vector<HoldingAltitude>& reports,
                          const LandingQueue& order, double base_altitude_ft,
                          double band_width_ft, double ceiling_ft) {
  HoldingStack s;
  s.base_altitude_ft = base_altitude_ft;
  s.band_width_ft = band_width_ft;
  for (const auto& r : reports) {
    if (r.altitude_ft < base_altitude_ft || r.altitude_ft >= ceiling_ft) {
      throw SimError(Err::AltitudeOutOfRange,
                     r.id + " at " + std::to_string(r.altitude_ft) + " ft");
    }
    int band = static_cast<int>(
        std::floor((r.altitude_ft - base_altitude_ft) / band_width_ft));
    if (static_cast<int>(s.levels.size()) <= band) {
      s.levels.resize(band + 1);
    }
    s.levels[band].members.push_back(r.id);
  }
  for (auto& level : s.levels) sort_level(level, order);
  return s;
}

int stack_insert(HoldingStack& s, const std::string& id,
                 const LandingQueue& order, int level_capacity) {
  s.level_capacity = level_capacity;
  if (s.levels.empty()) s.levels.emplace_back();
  s.levels.back().members.push_back(id);
  repack(s, order);
  auto lvl = s.level_of(id);
  return lvl ? *lvl : 0;
}

void stack_remove(HoldingStack& s, const std::string& id,
                  const LandingQueue& order) {
  auto lvl = s.level_of(id);
  if (!lvl) throw SimError(Err::NotFound, "stack_remove: " + id);
  auto& members = s.levels[*lvl].members;
  members.erase(std::find(members.begin(), members.end(), id));
  repack(s, order);
}

void handover_leadership(HoldingStack& s, const std::string& departing,
                         const LandingQueue& order) {
  auto lvl = s.level_of(departing);
  if (!lvl || s.levels[*lvl].leader != departing) {
    throw SimError(Err::NotALeader, "handover_leadership: " + departing);
  }
  stack_remove(s, departing, order);
}

void stack_resync_order(HoldingStack& s, const LandingQueue& order) {
  repack(s, order);
}

}  // namespace atcsim
