#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jointspec {

enum class ErrorCode {
  DimensionMismatch,
  ArityMismatch,
  InvalidArgument,
  NotNormal,
  NoConvergence,
  GridTooLarge,
  DegenerateLeadingCoefficient,
  NotDiagonal,
  NotReducible,
  ZeroNormal,
  SingularC,
  NotCommuting,
  NoSharedVector,
  ContourThroughSpectrum,
  RankMismatch,
  MultiplicityRegimeViolation,
  TrackingLost,
  SingularPoint,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::DegenerateLeadingCoefficient: return "DegenerateLeadingCoefficient";
    case ErrorCode::NotDiagonal: return "NotDiagonal";
    case ErrorCode::NotReducible: return "NotReducible";
    case ErrorCode::ZeroNormal: return "ZeroNormal";
    case ErrorCode::SingularC: return "SingularC";
    case ErrorCode::NotCommuting: return "NotCommuting";
    case ErrorCode::NoSharedVector: return "NoSharedVector";
    case ErrorCode::ContourThroughSpectrum: return "ContourThroughSpectrum";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::MultiplicityRegimeViolation: return "MultiplicityRegimeViolation";
    case ErrorCode::TrackingLost: return "TrackingLost";
    case ErrorCode::SingularPoint: return "SingularPoint";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class SpectralError : public std::runtime_error {
 public:
  SpectralError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace jointspec
