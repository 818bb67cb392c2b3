#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace l1quad {

enum class ErrorCode {
  NotSkewSymmetric,
  NotOnSO3,
  GimbalLock,
  TooFarFromSO3,
  InvalidSpec,
  InvalidParams,
  NumericalDivergence,
  DegenerateForce,
  SingularYawAxis,
  SmallFeedforwardDenominator,
  ParseError,
  ValidationError,
  EmptyWindow,
  UnknownScenario,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSkewSymmetric: return "NotSkewSymmetric";
    case ErrorCode::NotOnSO3: return "NotOnSO3";
    case ErrorCode::GimbalLock: return "GimbalLock";
    case ErrorCode::TooFarFromSO3: return "TooFarFromSO3";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NumericalDivergence: return "NumericalDivergence";
    case ErrorCode::DegenerateForce: return "DegenerateForce";
    case ErrorCode::SingularYawAxis: return "SingularYawAxis";
    case ErrorCode::SmallFeedforwardDenominator: return "SmallFeedforwardDenominator";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace l1quad
