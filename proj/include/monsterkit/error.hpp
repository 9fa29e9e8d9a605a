#pragma once

#include <stdexcept>
#include <string>

namespace monsterkit {

enum class ErrorCode {
  InvalidSpec,
  UncountableSpec,
  Unclassifiable,
  ModeSpecMismatch,
  NotParallel,
  UnequalLength,
  Overlapping,
  AlreadyGlued,
  UnknownMark,
  StartsOnSlit,
  WindowTooSmall,
  EmptyFamily,
  NonPositiveDeterminant,
  PlacementFailure,
  InvalidGroup,
  ContractingWitness,
  UnsupportedSpec,
  BallTooSmall,
  MismatchWitness,
  EvidenceFailure,
  Config,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::UncountableSpec: return "UncountableSpec";
    case ErrorCode::Unclassifiable: return "Unclassifiable";
    case ErrorCode::ModeSpecMismatch: return "ModeSpecMismatch";
    case ErrorCode::NotParallel: return "NotParallel";
    case ErrorCode::UnequalLength: return "UnequalLength";
    case ErrorCode::Overlapping: return "Overlapping";
    case ErrorCode::AlreadyGlued: return "AlreadyGlued";
    case ErrorCode::UnknownMark: return "UnknownMark";
    case ErrorCode::StartsOnSlit: return "StartsOnSlit";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::NonPositiveDeterminant: return "NonPositiveDeterminant";
    case ErrorCode::PlacementFailure: return "PlacementFailure";
    case ErrorCode::InvalidGroup: return "InvalidGroup";
    case ErrorCode::ContractingWitness: return "ContractingWitness";
    case ErrorCode::UnsupportedSpec: return "UnsupportedSpec";
    case ErrorCode::BallTooSmall: return "BallTooSmall";
    case ErrorCode::MismatchWitness: return "MismatchWitness";
    case ErrorCode::EvidenceFailure: return "EvidenceFailure";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace monsterkit
