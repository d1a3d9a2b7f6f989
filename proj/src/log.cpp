#include "zsm/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace zsm::log {

Level threshold() {
  static const Level level = [] {
    const char* env = std::getenv("ZSM_LOG");
    if (env == nullptr) return Level::warn;
    const std::string v(env);
    if (v == "error") return Level::error;
    if (v == "info") return Level::info;
    if (v == "debug") return Level::debug;
    return Level::warn;
  }();
  return level;
}

void write(Level level, std::string_view message) {
  if (static_cast<int>(level) > static_cast<int>(threshold())) return;
  static std::mutex mu;
  static constexpr const char* kNames[] = {"error", "warn", "info", "debug"};
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[zsm " << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace zsm::log
