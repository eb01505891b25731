#pragma once

#include <stdexcept>
#include <string>

namespace atcsim {

enum class Err {
  BufferFull,
  DuplicateId,
  NotFound,
  AltitudeOutOfRange,
  NotALeader,
  IllegalTransition,
  InvariantViolation,
  MalformedExternalRecord,
  ParseError,
  TruncatedLog,
  MixedScenarios,
  EmptyInput,
};

const char* err_name(Err e);

// Contract violations and unusable input surface as exceptions; expected
// outcomes of normal operation (a full buffer, a lost message) are return
// values on the operations that produce them.
class SimError : public std::runtime_error {
 public:
  SimError(Err code, const std::string& detail)
      : std::runtime_error(std::string(err_name(code)) + ": " + detail),
        code_(code) {}

  Err code() const { return code_; }

 private:
  Err code_;
};

}  // namespace atcsim
