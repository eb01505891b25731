#include "atcsim/queue.hpp"

#include <algorithm>

#include "atcsim/errors.hpp"

namespace atcsim {

bool LandingQueue::contains(const std::string& id) const {
  return index_of(id).has_value();
}

std::optional<int> LandingQueue::index_of(const std::string& id) const {
  auto it = std::find(entries.begin(), entries.end(), id);
  if (it == entries.end()) return std::nullopt;
  return static_cast<int>(it - entries.begin());
}

const char* to_string(AdmitResult r) {
  switch (r) {
    case AdmitResult::Admitted: return "Admitted";
    case AdmitResult::BufferFull: return "BufferFull";
    case AdmitResult::DuplicateId: return "DuplicateId";
  }
  return "?";
}

AdmitResult queue_admit(LandingQueue& q, const std::string& id) {
  if (q.contains(id)) return AdmitResult::DuplicateId;
  if (q.size() >= q.capacity) return AdmitResult::BufferFull;
  q.entries.push_back(id);
  ++q.version;
  return AdmitResult::Admitted;
}

void queue_remove(LandingQueue& q, const std::string& id) {
  auto idx = q.index_of(id);
  if (!idx) throw SimError(Err::NotFound, "queue_remove: " + id);
  q.entries.erase(q.entries.begin() + *idx);
  ++q.version;
}

void queue_promote_to_head(LandingQueue& q, const std::string& id) {
  auto idx = q.index_of(id);
  if (!idx) throw SimError(Err::NotFound, "queue_promote_to_head: " + id);
  std::rotate(q.entries.begin(), q.entries.begin() + *idx,
              q.entries.begin() + *idx + 1);
  ++q.version;
}

}  // namespace atcsim
