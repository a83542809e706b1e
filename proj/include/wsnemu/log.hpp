// SPDX-License-Identifier: Apache-2.0

#ifndef WSNEMU_LOG_HPP
#define WSNEMU_LOG_HPP

#include <sstream>
#include <string>

namespace wsnemu {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3, Trace = 4 };

LogLevel logLevel();
void setLogLevel(LogLevel level);

// Parses "error"/"warn"/"info"/"debug"/"trace"; returns false on unknown names.
bool setLogLevel(const std::string& name);

// Reads the WSNEMU_LOG environment variable, if set.
void initLogFromEnv();

void logLine(LogLevel level, const std::string& msg);

namespace detail {
template <typename... Args>
std::string concat(Args&&... args)
{
    std::ostringstream os;
    (os << ... << args);
    return os.str();
}
} // namespace detail

} // namespace wsnemu

#define WSNEMU_LOG(level, ...)                                                        \
    do {                                                                              \
        if (static_cast<int>(level) <= static_cast<int>(::wsnemu::logLevel()))        \
            ::wsnemu::logLine(level, ::wsnemu::detail::concat(__VA_ARGS__));          \
    } while (0)

#define LOG_ERROR(...) WSNEMU_LOG(::wsnemu::LogLevel::Error, __VA_ARGS__)
#define LOG_WARN(...) WSNEMU_LOG(::wsnemu::LogLevel::Warn, __VA_ARGS__)
#define LOG_INFO(...) WSNEMU_LOG(::wsnemu::LogLevel::Info, __VA_ARGS__)
#define LOG_DEBUG(...) WSNEMU_LOG(::wsnemu::LogLevel::Debug, __VA_ARGS__)
#define LOG_TRACE(...) WSNEMU_LOG(::wsnemu::LogLevel::Trace, __VA_ARGS__)

#endif
