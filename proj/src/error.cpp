#include "har/error.hpp"

namespace har {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::UnknownActivity: return "UnknownActivity";
    case ErrorCode::UnknownSensor: return "UnknownSensor";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::EmptySignal: return "EmptySignal";
    case ErrorCode::SignalTooShort: return "SignalTooShort";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::WidthMismatch: return "WidthMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::TooFewInstances: return "TooFewInstances";
    case ErrorCode::TooFewUnits: return "TooFewUnits";
    case ErrorCode::SingleSubject: return "SingleSubject";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message,
                           std::optional<std::size_t> line) {
  std::string out = to_string(code);
  if (line) out += " at line " + std::to_string(*line);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> line)
    : std::runtime_error(format_message(code, message, line)), code_(code), line_(line) {}

}  // namespace har
