#include "bosim/log.hpp"
#include "bosim/error.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace bosim {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_dimension: return "invalid_dimension";
        case ErrorCode::unitarity_violation: return "unitarity_violation";
        case ErrorCode::hermiticity_violation: return "hermiticity_violation";
        case ErrorCode::invalid_shape: return "invalid_shape";
        case ErrorCode::size_limit: return "size_limit";
        case ErrorCode::invalid_multiset: return "invalid_multiset";
        case ErrorCode::invalid_power: return "invalid_power";
        case ErrorCode::shape_mismatch: return "shape_mismatch";
        case ErrorCode::invalid_subset: return "invalid_subset";
        case ErrorCode::enumeration_too_large: return "enumeration_too_large";
        case ErrorCode::invalid_fold: return "invalid_fold";
        case ErrorCode::invalid_distribution: return "invalid_distribution";
        case ErrorCode::insufficient_data: return "insufficient_data";
        case ErrorCode::inconsistent_counts: return "inconsistent_counts";
        case ErrorCode::invalid_entropy: return "invalid_entropy";
        case ErrorCode::invalid_config: return "invalid_config";
        case ErrorCode::io_error: return "io_error";
    }
    return "unknown";
}

static LogLevel parse_level() {
    const char* env = std::getenv("BOSIM_LOG");
    if (!env) return LogLevel::warn;
    std::string s(env);
    if (s == "debug") return LogLevel::debug;
    if (s == "info") return LogLevel::info;
    if (s == "warn") return LogLevel::warn;
    if (s == "error") return LogLevel::error;
    return LogLevel::warn;
}

LogLevel log_level() {
    static LogLevel level = parse_level();
    return level;
}

void log_message(LogLevel level, const std::string& msg) {
    static std::mutex mtx;
    static const char* names[] = {"debug", "info", "warn", "error"};
    std::lock_guard<std::mutex> lock(mtx);
    std::cerr << "[bosim " << names[static_cast<int>(level)] << "] " << msg << "\n";
}

} // namespace bosim
