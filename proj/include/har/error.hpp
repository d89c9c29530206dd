#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace har {

enum class ErrorCode {
  InvalidArgument,
  Io,
  MalformedRow,
  NonMonotonicTimestamps,
  NonFiniteValue,
  UnknownActivity,
  UnknownSensor,
  SchemaMismatch,
  EmptySignal,
  SignalTooShort,
  LengthMismatch,
  WidthMismatch,
  DimensionMismatch,
  EmptyTrainingSet,
  TooFewInstances,
  TooFewUnits,
  SingleSubject,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception type for every recoverable failure in the toolkit. Parse errors
/// carry the 1-based line number of the offending input row.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace har
