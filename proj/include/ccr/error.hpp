#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ccr {

enum class ErrorKind {
  Parse,                // malformed file content
  Validation,           // well-formed but violates a schema invariant
  Io,                   // missing or unreadable file
  InsufficientHistory,  // fewer than 3 history foods
  DegenerateInput,      // zero variance / zero spread
  OutOfRange,           // K or count argument outside its domain
  InsufficientData,     // statistics with too few usable observations
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` lets callers map failures
/// to exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ccr
