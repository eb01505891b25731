#include "atcsim/event_log.hpp"

#include <charconv>

#include "atcsim/errors.hpp"

namespace atcsim {

void EventLog::emit(int64_t t, std::string kind, std::string subject,
                    nlohmann::ordered_json payload) {
  events_.push_back(
      Event{t, std::move(kind), std::move(subject), std::move(payload)});
}

std::string format_event(const Event& e) {
  std::string line = std::to_string(e.t);
  line += '\t';
  line += e.kind;
  line += '\t';
  line += e.subject;
  line += '\t';
  line += e.payload.dump();
  return line;
}

std::string EventLog::text() const {
  std::string out;
  for (const auto& e : events_) {
    out += format_event(e);
    out += '\n';
  }
  return out;
}

std::vector<Event> parse_event_log(std::string_view text) {
  std::vector<Event> events;
  size_t pos = 0;
  size_t line_no = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;

    size_t a = line.find('\t');
    size_t b = a == std::string_view::npos ? a : line.find('\t', a + 1);
    size_t c = b == std::string_view::npos ? b : line.find('\t', b + 1);
    if (c == std::string_view::npos) {
      throw SimError(Err::ParseError,
                     "log line " + std::to_string(line_no) + ": want 4 fields");
    }
    Event e;
    std::string_view tf = line.substr(0, a);
    auto [ptr, ec] = std::from_chars(tf.data(), tf.data() + tf.size(), e.t);
    if (ec != std::errc() || ptr != tf.data() + tf.size()) {
      throw SimError(Err::ParseError,
                     "log line " + std::to_string(line_no) + ": bad time");
    }
    e.kind = std::string(line.substr(a + 1, b - a - 1));
    e.subject = std::string(line.substr(b + 1, c - b - 1));
    std::string_view payload = line.substr(c + 1);
    e.payload = nlohmann::ordered_json::parse(payload, nullptr, false);
    if (e.payload.is_discarded()) {
      throw SimError(Err::ParseError,
                     "log line " + std::to_string(line_no) + ": bad payload");
    }
    events.push_back(std::move(e));
  }
  if (events.empty()) {
    throw SimError(Err::EmptyInput, "event log has no lines");
  }
  return events;
}

}  // namespace atcsim
