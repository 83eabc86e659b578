#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdd {

enum class ErrorKind {
  InvalidData,
  SampleTooSmall,
  OracleRangeExceeded,
  DegenerateData,
  DegenerateDraw,
  InvalidQuantile,
  InvalidConfig,
  InvalidInput,
  ParseError,
  DuplicateSetId,
  UnknownColumn,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for every failure raised by the library; `kind()`
/// lets callers (the CLI, the screening pipeline) branch without RTTI games.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace mdd
