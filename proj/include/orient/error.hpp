#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orient {

enum class ErrorKind {
  DegenerateCorrespondences,
  SingularSolution,
  PointAtInfinity,
  ZeroVector,
  ParseError,
  DuplicateFrame,
  MissingCorners,
  DuplicateKey,
  InvalidEvent,
  MissingShoulders,
  MissingHips,
  CoincidentParts,
  EmptyTrapezoid,
  InvalidCrop,
  MissingClass,
  NonFiniteFeature,
  CoincidentWithBall,
  WeightOutOfRange,
  EmptyInput,
  InvalidConfig,
  TooFewDefenders,
  AtGoalCenter,
  IdMismatch,
  Io,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegenerateCorrespondences: return "DegenerateCorrespondences";
    case ErrorKind::SingularSolution: return "SingularSolution";
    case ErrorKind::PointAtInfinity: return "PointAtInfinity";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DuplicateFrame: return "DuplicateFrame";
    case ErrorKind::MissingCorners: return "MissingCorners";
    case ErrorKind::DuplicateKey: return "DuplicateKey";
    case ErrorKind::InvalidEvent: return "InvalidEvent";
    case ErrorKind::MissingShoulders: return "MissingShoulders";
    case ErrorKind::MissingHips: return "MissingHips";
    case ErrorKind::CoincidentParts: return "CoincidentParts";
    case ErrorKind::EmptyTrapezoid: return "EmptyTrapezoid";
    case ErrorKind::InvalidCrop: return "InvalidCrop";
    case ErrorKind::MissingClass: return "MissingClass";
    case ErrorKind::NonFiniteFeature: return "NonFiniteFeature";
    case ErrorKind::CoincidentWithBall: return "CoincidentWithBall";
    case ErrorKind::WeightOutOfRange: return "WeightOutOfRange";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::TooFewDefenders: return "TooFewDefenders";
    case ErrorKind::AtGoalCenter: return "AtGoalCenter";
    case ErrorKind::IdMismatch: return "IdMismatch";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// All library failures are reported through this one exception type; the
/// kind carries the category and what() carries the detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace orient
