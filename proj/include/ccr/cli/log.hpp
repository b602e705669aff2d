#pragma once

#include <string_view>

#include <fmt/format.h>

namespace ccr::cli {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Level from the CCR_LOG environment variable (error, warn, info, debug);
/// warn when unset or unrecognised.
LogLevel log_level();
void set_log_level(LogLevel level);
void log_line(LogLevel level, std::string_view message);

template <typename... Args>
void log(LogLevel level, fmt::format_string<Args...> format, Args&&... args) {
  if (level <= log_level()) log_line(level, fmt::format(format, std::forward<Args>(args)...));
}

}  // namespace ccr::cli
