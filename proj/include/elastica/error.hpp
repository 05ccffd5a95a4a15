#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace elastica {

enum class ErrorCode {
  TooFewPoints,
  DegenerateEdge,
  NonUniform,
  LengthMismatch,
  PointOnCurve,
  NonPositiveFactor,
  NonPositiveRadius,
  MalformedDomain,
  InvalidParameters,
  ProjectionFailed,
  Infeasible,
  NotSimple,
  MultiplicityViolation,
  InvalidInput,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; `code()` tells callers what went
/// wrong, `index()` / `value()` carry the offending vertex or residual when
/// there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> index = std::nullopt,
        std::optional<double> value = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }
  std::optional<double> value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
  std::optional<double> value_;
};

}  // namespace elastica
