#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace atcsim {

// Shared landing queue. The engine owns the authoritative instance; every
// aircraft and both supervisors hold replicas synchronized by version-stamped
// broadcasts. Order is first-come-first-served by admission, head at index 0.
struct LandingQueue {
  std::vector<std::string> entries;
  int capacity = 12;
  uint64_t version = 0;

  bool contains(const std::string& id) const;
  std::optional<int> index_of(const std::string& id) const;
  int size() const { return static_cast<int>(entries.size()); }
  bool operator==(const LandingQueue& other) const {
    return entries == other.entries && version == other.version;
  }
};

enum class AdmitResult { Admitted, BufferFull, DuplicateId };

const char* to_string(AdmitResult r);

// Appends id to the tail and bumps the version. A full or duplicate queue is
// reported, not thrown: both are expected under saturation.
AdmitResult queue_admit(LandingQueue& q, const std::string& id);

// Removes id wherever it sits. Throws NotFound for an id not present.
void queue_remove(LandingQueue& q, const std::string& id);

// Moves id to the head, demoting everything it passes by one slot.
// Throws NotFound for an id not present.
void queue_promote_to_head(LandingQueue& q, const std::string& id);

}  // namespace atcsim
