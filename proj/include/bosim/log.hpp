#ifndef BOSIM_LOG_HPP
#define BOSIM_LOG_HPP

#include <sstream>
#include <string>

namespace bosim {

// Log level comes from the BOSIM_LOG environment variable (debug|info|warn|error).
// Default is warn so library use stays quiet.
enum class LogLevel { debug = 0, info = 1, warn = 2, error = 3 };

LogLevel log_level();
void log_message(LogLevel level, const std::string& msg);

template <typename... Args>
void log_at(LogLevel level, Args&&... args) {
    if (level < log_level()) return;
    std::ostringstream oss;
    (oss << ... << args);
    log_message(level, oss.str());
}

template <typename... Args> void log_debug(Args&&... args) { log_at(LogLevel::debug, args...); }
template <typename... Args> void log_info(Args&&... args) { log_at(LogLevel::info, args...); }
template <typename... Args> void log_warn(Args&&... args) { log_at(LogLevel::warn, args...); }
template <typename... Args> void log_error(Args&&... args) { log_at(LogLevel::error, args...); }

} // namespace bosim

#endif
