#include "atcsim/errors.hpp"

namespace atcsim {

const char* err_name(Err e) {
  switch (e) {
    case Err::BufferFull: return "BufferFull";
    case Err::DuplicateId: return "DuplicateId";
    case Err::NotFound: return "NotFound";
    case Err::AltitudeOutOfRange: return "AltitudeOutOfRange";
    case Err::NotALeader: return "NotALeader";
    case Err::IllegalTransition: return "IllegalTransition";
    case Err::InvariantViolation: return "InvariantViolation";
    case Err::MalformedExternalRecord: return "MalformedExternalRecord";
    case Err::ParseError: return "ParseError";
    case Err::TruncatedLog: return "TruncatedLog";
    case Err::MixedScenarios: return "MixedScenarios";
    case Err::EmptyInput: return "EmptyInput";
  }
  return "UnknownError";
}

}  // namespace atcsim
