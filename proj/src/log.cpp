// SPDX-License-Identifier: Apache-2.0

#include "wsnemu/log.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>

#include "wsnemu/bytes.hpp"

namespace wsnemu {

namespace {
std::atomic<int> g_level{static_cast<int>(LogLevel::Warn)};

const char* levelName(LogLevel level)
{
    switch (level) {
    case LogLevel::Error: return "error";
    case LogLevel::Warn: return "warn";
    case LogLevel::Info: return "info";
    case LogLevel::Debug: return "debug";
    case LogLevel::Trace: return "trace";
    }
    return "?";
}
} // namespace

LogLevel logLevel() { return static_cast<LogLevel>(g_level.load(std::memory_order_relaxed)); }

void setLogLevel(LogLevel level) { g_level.store(static_cast<int>(level), std::memory_order_relaxed); }

bool setLogLevel(const std::string& name)
{
    for (LogLevel l : {LogLevel::Error, LogLevel::Warn, LogLevel::Info, LogLevel::Debug, LogLevel::Trace}) {
        if (name == levelName(l)) {
            setLogLevel(l);
            return true;
        }
    }
    return false;
}

void initLogFromEnv()
{
    if (const char* env = std::getenv("WSNEMU_LOG"))
        setLogLevel(std::string(env));
}

void logLine(LogLevel level, const std::string& msg)
{
    std::fprintf(stderr, "[%s] %s\n", levelName(level), msg.c_str());
}

std::string toHex(ByteView data, char sep)
{
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 3);
    for (size_t i = 0; i < data.size(); ++i) {
        if (i && sep)
            out.push_back(sep);
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0xF]);
    }
    return out;
}

Bytes fromHex(const std::string& text)
{
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        if (c >= 'A' && c <= 'F')
            return c - 'A' + 10;
        return -1;
    };
    Bytes out;
    int hi = -1;
    for (char c : text) {
        int n = nibble(c);
        if (n < 0)
            continue;
        if (hi < 0) {
            hi = n;
        } else {
            out.push_back(static_cast<uint8_t>((hi << 4) | n));
            hi = -1;
        }
    }
    return out;
}

} // namespace wsnemu
