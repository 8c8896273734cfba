#include "klift/error.hpp"

namespace klift {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::OutsideChart: return "OutsideChart";
    case ErrorCode::PositivityViolation: return "PositivityViolation";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::ProportionalityDomain: return "ProportionalityDomain";
    case ErrorCode::CoefficientMismatch: return "CoefficientMismatch";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::SingularFrame: return "SingularFrame";
    case ErrorCode::StencilOutsideChart: return "StencilOutsideChart";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::ExhaustedSampling: return "ExhaustedSampling";
    case ErrorCode::PerturbationTooSmall: return "PerturbationTooSmall";
    case ErrorCode::ConfigParseError: return "ConfigParseError";
  }
  return "Unknown";
}

}  // namespace klift
