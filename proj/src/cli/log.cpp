#include "ccr/cli/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace ccr::cli {

namespace {

LogLevel from_env() {
  const char* raw = std::getenv("CCR_LOG");
  if (!raw) return LogLevel::Warn;
  const std::string value(raw);
  if (value == "error") return LogLevel::Error;
  if (value == "info") return LogLevel::Info;
  if (value == "debug") return LogLevel::Debug;
  return LogLevel::Warn;
}

std::atomic<int>& level_storage() {
  static std::atomic<int> level{static_cast<int>(from_env())};
  return level;
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

constexpr std::string_view kNames[] = {"error", "warn", "info", "debug"};

}  // namespace

LogLevel log_level() { return static_cast<LogLevel>(level_storage().load()); }

void set_log_level(LogLevel level) { level_storage().store(static_cast<int>(level)); }

void log_line(LogLevel level, std::string_view message) {
  const std::lock_guard lock(sink_mutex());
  std::cerr << "[ccr " << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace ccr::cli
