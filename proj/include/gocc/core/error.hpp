#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gocc {

enum class ErrorCode {
  invalid_rotation,
  index,
  empty_configuration,
  configuration,
  sequence_too_short,
  degenerate_covariance,
  label,
  shape,
  undefined_metric,
  format,
  io,
  validation,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure the library reports carries a code so callers and tests can
// branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Malformed binary input. `offset` is the byte position where decoding failed.
class FormatError : public Error {
 public:
  FormatError(std::uint64_t offset, const std::string& message);

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

// A configuration field failed validation. `field` names it.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message);

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace gocc
