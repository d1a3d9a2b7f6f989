#ifndef ZSM_LOG_HPP
#define ZSM_LOG_HPP

#include <string_view>

namespace zsm::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

/// Verbosity from the ZSM_LOG environment variable (error|warn|info|debug), default warn.
Level threshold();
void write(Level level, std::string_view message);

inline void warn(std::string_view m) { write(Level::warn, m); }
inline void info(std::string_view m) { write(Level::info, m); }
inline void debug(std::string_view m) { write(Level::debug, m); }

}  // namespace zsm::log

#endif  // ZSM_LOG_HPP
