#include "duet/error.hpp"

namespace duet {

const char* err_name(Err code) {
  switch (code) {
    case Err::InvalidSelector: return "InvalidSelector";
    case Err::TooShort: return "TooShort";
    case Err::MissingGroup: return "MissingGroup";
    case Err::DegeneratePositions: return "DegeneratePositions";
    case Err::UnknownCategory: return "UnknownCategory";
    case Err::InvalidDistance: return "InvalidDistance";
    case Err::InvalidSchedule: return "InvalidSchedule";
    case Err::NumericalDomain: return "NumericalDomain";
    case Err::InvalidConstraint: return "InvalidConstraint";
    case Err::InvalidOverlap: return "InvalidOverlap";
    case Err::MissingSource: return "MissingSource";
    case Err::SkeletonMismatch: return "SkeletonMismatch";
    case Err::UndefinedCorrelation: return "UndefinedCorrelation";
    case Err::AgentProtocolError: return "AgentProtocolError";
    case Err::TriggerWordNotFound: return "TriggerWordNotFound";
    case Err::PlanInconsistent: return "PlanInconsistent";
    case Err::ParseError: return "ParseError";
    case Err::ValidationError: return "ValidationError";
    case Err::UnsupportedVersion: return "UnsupportedVersion";
    case Err::MissingHierarchy: return "MissingHierarchy";
    case Err::TransportError: return "TransportError";
    case Err::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

Error::Error(Err code, const std::string& msg)
    : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}

void fail(Err code, const std::string& msg) { throw Error(code, msg); }

}  // namespace duet
