#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace atcsim {

// One line of the run log: time, kind, subject, payload. The log is the only
// run artifact; metrics and post-run checks are pure functions of it.
struct Event {
  int64_t t = 0;
  std::string kind;
  std::string subject;
  nlohmann::ordered_json payload;
};

// Append-only writer. Every run starts with run_meta and ends with run_end;
// a log missing its footer is truncated and unusable for metrics.
class EventLog {
 public:
  void emit(int64_t t, std::string kind, std::string subject,
            nlohmann::ordered_json payload);

  const std::vector<Event>& events() const { return events_; }
  std::string text() const;
  size_t size() const { return events_.size(); }

 private:
  std::vector<Event> events_;
};

std::string format_event(const Event& e);

// Parses a serialized log. Throws EmptyInput for a blank document and
// ParseError for a malformed line.
std::vector<Event> parse_event_log(std::string_view text);

}  // namespace atcsim
