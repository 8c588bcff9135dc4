#pragma once

namespace featuresort {

enum class LogLevel { Silent = 0, Warn = 1, Info = 2, Debug = 3 };

/// Verbosity from FEATURESORT_LOG (silent|warn|info|debug), read once.
/// Defaults to warn.
LogLevel log_level();

void log_warn(const char* fmt, ...);
void log_info(const char* fmt, ...);
void log_debug(const char* fmt, ...);

}  // namespace featuresort
