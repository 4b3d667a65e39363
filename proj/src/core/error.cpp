#include "gocc/core/error.hpp"

namespace gocc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_rotation: return "invalid-rotation";
    case ErrorCode::index: return "index";
    case ErrorCode::empty_configuration: return "empty-configuration";
    case ErrorCode::configuration: return "configuration";
    case ErrorCode::sequence_too_short: return "sequence-too-short";
    case ErrorCode::degenerate_covariance: return "degenerate-covariance";
    case ErrorCode::label: return "label";
    case ErrorCode::shape: return "shape";
    case ErrorCode::undefined_metric: return "undefined-metric";
    case ErrorCode::format: return "format";
    case ErrorCode::io: return "io";
    case ErrorCode::validation: return "validation";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + " error: " + message), code_(code) {}

FormatError::FormatError(std::uint64_t offset, const std::string& message)
    : Error(ErrorCode::format, message + " (at byte " + std::to_string(offset) + ")"),
      offset_(offset) {}

ValidationError::ValidationError(std::string field, const std::string& message)
    : Error(ErrorCode::validation, field + ": " + message), field_(std::move(field)) {}

}  // namespace gocc
