#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperlev {

enum class ErrorCode {
  ZeroLeadingCoefficient,
  PrincipalPartPresent,
  UnsupportedOrder,
  UnsupportedGrid,
  NonvanishingInner,
  IndexError,
  DomainError,
  InvalidParameters,
  PoleEvaluation,
  RhoOneTooSmall,
  InconsistentRoots,
  RegimeMismatch,
  IndexOutOfRange,
  BracketFailure,
  TrackingDivergence,
  BelowValidityThreshold,
  NotRiskNeutral,
  GaussianRequired,
  AtKinkPoint,
  ContourOutOfStrip,
  ConfigError,
  FixtureError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroLeadingCoefficient: return "ZeroLeadingCoefficient";
    case ErrorCode::PrincipalPartPresent: return "PrincipalPartPresent";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::UnsupportedGrid: return "UnsupportedGrid";
    case ErrorCode::NonvanishingInner: return "NonvanishingInner";
    case ErrorCode::IndexError: return "IndexError";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::PoleEvaluation: return "PoleEvaluation";
    case ErrorCode::RhoOneTooSmall: return "RhoOneTooSmall";
    case ErrorCode::InconsistentRoots: return "InconsistentRoots";
    case ErrorCode::RegimeMismatch: return "RegimeMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::TrackingDivergence: return "TrackingDivergence";
    case ErrorCode::BelowValidityThreshold: return "BelowValidityThreshold";
    case ErrorCode::NotRiskNeutral: return "NotRiskNeutral";
    case ErrorCode::GaussianRequired: return "GaussianRequired";
    case ErrorCode::AtKinkPoint: return "AtKinkPoint";
    case ErrorCode::ContourOutOfStrip: return "ContourOutOfStrip";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::FixtureError: return "FixtureError";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hyperlev
