#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace codasplr {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Level comes from the CODASPLR_LOG environment variable
// (error | warn | info | debug), read once; default is warn.
inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("CODASPLR_LOG");
        if (env == nullptr) return LogLevel::Warn;
        const std::string v(env);
        if (v == "error") return LogLevel::Error;
        if (v == "info") return LogLevel::Info;
        if (v == "debug") return LogLevel::Debug;
        return LogLevel::Warn;
    }();
    return level;
}

inline void log_line(LogLevel level, const char* tag, const std::string& message) {
    if (level <= log_level()) std::cerr << "[" << tag << "] " << message << "\n";
}

inline void log_error(const std::string& m) { log_line(LogLevel::Error, "error", m); }
inline void log_warn(const std::string& m) { log_line(LogLevel::Warn, "warn", m); }
inline void log_info(const std::string& m) { log_line(LogLevel::Info, "info", m); }
inline void log_debug(const std::string& m) { log_line(LogLevel::Debug, "debug", m); }

}  // namespace codasplr
