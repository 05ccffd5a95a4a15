#include "elastica/error.hpp"

namespace elastica {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DegenerateEdge: return "DegenerateEdge";
    case ErrorCode::NonUniform: return "NonUniform";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::PointOnCurve: return "PointOnCurve";
    case ErrorCode::NonPositiveFactor: return "NonPositiveFactor";
    case ErrorCode::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorCode::MalformedDomain: return "MalformedDomain";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::ProjectionFailed: return "ProjectionFailed";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::MultiplicityViolation: return "MultiplicityViolation";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> index, std::optional<double> value)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      index_(index),
      value_(value) {}

}  // namespace elastica
