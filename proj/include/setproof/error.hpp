#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace setproof {

enum class ErrorCode {
  ParseError,
  InvalidPath,
  CategoryMismatch,
  UnknownRule,
  RuleNotApplicable,
  NothingToUndo,
  NothingToRedo,
  InvalidTheorem,
  UnknownGoal,
  UnknownGiven,
  NotApplicable,
  FreshnessViolation,
  ArgumentMissing,
  InvalidArgument,
  UnboundVariable,
  MalformedXml,
  SchemaViolation,
  ReplayFailure,
};

/// Stable name of an error code, e.g. "NotApplicable". These names are part
/// of the service and CLI surface.
std::string_view error_name(ErrorCode code);

/// Every failure raised by the library. `position` carries the 1-based
/// character offset for ParseError, the line for MalformedXml and the 1-based
/// step index for ReplayFailure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> position = std::nullopt)
      : std::runtime_error(message), code_(code), position_(position) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> position_;
};

}  // namespace setproof
