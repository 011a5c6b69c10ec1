#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace tandem {

enum class LogLevel : int { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Verbosity from TANDEM_LOG={error,warn,info,debug}; default warn. All log
// output goes to stderr so stdout stays machine-readable.
inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("TANDEM_LOG");
        const std::string v = env ? env : "warn";
        if (v == "error") return LogLevel::Error;
        if (v == "info") return LogLevel::Info;
        if (v == "debug") return LogLevel::Debug;
        return LogLevel::Warn;
    }();
    return level;
}

inline void log(LogLevel level, const std::string& msg) {
    static const char* names[] = {"error", "warn", "info", "debug"};
    if (static_cast<int>(level) <= static_cast<int>(log_level())) {
        std::cerr << "[" << names[static_cast<int>(level)] << "] " << msg << "\n";
    }
}

inline void log_error(const std::string& msg) { log(LogLevel::Error, msg); }
inline void log_warn(const std::string& msg) { log(LogLevel::Warn, msg); }
inline void log_info(const std::string& msg) { log(LogLevel::Info, msg); }
inline void log_debug(const std::string& msg) { log(LogLevel::Debug, msg); }

}  // namespace tandem
