#include "ccr/error.hpp"

namespace ccr {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::InsufficientHistory: return "insufficient history";
    case ErrorKind::DegenerateInput: return "degenerate input";
    case ErrorKind::OutOfRange: return "out of range";
    case ErrorKind::InsufficientData: return "insufficient data";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace ccr
