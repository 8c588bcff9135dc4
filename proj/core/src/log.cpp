#include <featuresort/log.hpp>

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace featuresort {

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("FEATURESORT_LOG");
        if (!env) return LogLevel::Warn;
        if (std::strcmp(env, "silent") == 0) return LogLevel::Silent;
        if (std::strcmp(env, "info") == 0) return LogLevel::Info;
        if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
        return LogLevel::Warn;
    }();
    return level;
}

namespace {

void vlog(const char* tag, const char* fmt, va_list args) {
    std::fprintf(stderr, "[featuresort:%s] ", tag);
    std::vfprintf(stderr, fmt, args);
    std::fputc('\n', stderr);
}

}  // namespace

void log_warn(const char* fmt, ...) {
    if (log_level() < LogLevel::Warn) return;
    va_list args;
    va_start(args, fmt);
    vlog("warn", fmt, args);
    va_end(args);
}

void log_info(const char* fmt, ...) {
    if (log_level() < LogLevel::Info) return;
    va_list args;
    va_start(args, fmt);
    vlog("info", fmt, args);
    va_end(args);
}

void log_debug(const char* fmt, ...) {
    if (log_level() < LogLevel::Debug) return;
    va_list args;
    va_start(args, fmt);
    vlog("debug", fmt, args);
    va_end(args);
}

}  // namespace featuresort
