// SPDX-License-Identifier: Apache-2.0
//
// Scenario configuration in an omnetpp.ini-style dialect: [section] headers,
// key = value lines, and `**.`-prefixed wildcard keys. Only keys this tool
// defines are interpreted; unknown keys warn instead of failing so configs
// written for richer tools still load.

#ifndef WSNEMU_CONFIG_HPP
#define WSNEMU_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsnemu {

struct ConfigSyntaxError : std::runtime_error {
    ConfigSyntaxError(int line, const std::string& what)
        : std::runtime_error("config syntax error at line " + std::to_string(line) + ": " + what),
          line(line)
    {
    }
    int line;
};

struct ConfigTypeError : std::runtime_error {
    ConfigTypeError(int line, const std::string& what)
        : std::runtime_error("config type error at line " + std::to_string(line) + ": " + what),
          line(line)
    {
    }
    int line;
};

class ScenarioConfig {
public:
    enum class ValueKind { String, Int, Bool };

    struct Entry {
        std::string pattern; // as written, possibly with a leading "**."
        std::string rawValue;
        ValueKind kind;
        std::string stringValue;
        int64_t intValue = 0;
        bool boolValue = false;
        int line = 0;
        std::string section;
    };

    static ScenarioConfig parse(const std::string& text);
    static ScenarioConfig parseFile(const std::string& path);

    /// Exact-pattern matches win over wildcard matches; within a class the
    /// last line wins.
    const Entry* lookup(const std::string& path) const;

    bool has(const std::string& path) const { return lookup(path) != nullptr; }

    std::string getString(const std::string& path, const std::string& fallback) const;
    int64_t getInt(const std::string& path, int64_t fallback) const;
    uint64_t getUint(const std::string& path, uint64_t fallback) const;
    bool getBool(const std::string& path, bool fallback) const;

    const std::vector<Entry>& entries() const { return entries_; }

    /// Path suffixes of all entries matching "prefix[N]suffix"-style indexed
    /// keys, e.g. collectIndices("world.node[", "].behavior") -> {1, 2}.
    std::vector<int> collectIndices(const std::string& prefix) const;

private:
    std::vector<Entry> entries_;
};

} // namespace wsnemu

#endif
