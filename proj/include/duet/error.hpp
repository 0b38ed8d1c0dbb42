#pragma once

#include <stdexcept>
#include <string>

namespace duet {

enum class Err {
  InvalidSelector,
  TooShort,
  MissingGroup,
  DegeneratePositions,
  UnknownCategory,
  InvalidDistance,
  InvalidSchedule,
  NumericalDomain,
  InvalidConstraint,
  InvalidOverlap,
  MissingSource,
  SkeletonMismatch,
  UndefinedCorrelation,
  AgentProtocolError,
  TriggerWordNotFound,
  PlanInconsistent,
  ParseError,
  ValidationError,
  UnsupportedVersion,
  MissingHierarchy,
  TransportError,
  ConfigError,
};

const char* err_name(Err code);

/// Engine error carrying a stable code alongside the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg);
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] void fail(Err code, const std::string& msg);

}  // namespace duet
