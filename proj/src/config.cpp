// SPDX-License-Identifier: Apache-2.0

#include "wsnemu/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace wsnemu {

namespace {

std::string trim(const std::string& s)
{
    size_t begin = 0, end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin])))
        ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1])))
        --end;
    return s.substr(begin, end - begin);
}

bool parseInt(const std::string& text, int64_t& out)
{
    std::string t = text;
    bool negative = false;
    size_t pos = 0;
    if (pos < t.size() && (t[pos] == '-' || t[pos] == '+')) {
        negative = t[pos] == '-';
        ++pos;
    }
    if (pos >= t.size())
        return false;
    int base = 10;
    if (t.size() - pos > 2 && t[pos] == '0' && (t[pos + 1] == 'x' || t[pos + 1] == 'X')) {
        base = 16;
        pos += 2;
    }
    int64_t value = 0;
    size_t digits = 0;
    for (; pos < t.size(); ++pos) {
        char c = t[pos];
        int d;
        if (c >= '0' && c <= '9')
            d = c - '0';
        else if (base == 16 && c >= 'a' && c <= 'f')
            d = c - 'a' + 10;
        else if (base == 16 && c >= 'A' && c <= 'F')
            d = c - 'A' + 10;
        else
            return false;
        value = value * base + d;
        ++digits;
    }
    if (!digits)
        return false;
    out = negative ? -value : value;
    return true;
}

// A wildcard pattern "**.suffix" matches any path that is, or ends with,
// ".suffix". Other patterns match exactly.
bool matches(const std::string& pattern, const std::string& path, bool& isWildcard,
             size_t& suffixLen)
{
    if (pattern.rfind("**.", 0) == 0) {
        isWildcard = true;
        std::string suffix = pattern.substr(3);
        suffixLen = suffix.size();
        if (path == suffix)
            return true;
        return path.size() > suffix.size() + 1 &&
               path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0 &&
               path[path.size() - suffix.size() - 1] == '.';
    }
    isWildcard = false;
    suffixLen = pattern.size();
    return pattern == path;
}

} // namespace

ScenarioConfig ScenarioConfig::parse(const std::string& text)
{
    ScenarioConfig config;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineNo = 0;

    while (std::getline(in, line)) {
        ++lineNo;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        if (t[0] == '[') {
            auto close = t.find(']');
            if (close == std::string::npos)
                throw ConfigSyntaxError(lineNo, "unterminated section header");
            section = trim(t.substr(1, close - 1));
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigSyntaxError(lineNo, "expected 'key = value'");

        Entry entry;
        entry.pattern = trim(t.substr(0, eq));
        entry.line = lineNo;
        entry.section = section;
        std::string value = trim(t.substr(eq + 1));
        if (entry.pattern.empty())
            throw ConfigSyntaxError(lineNo, "empty key");
        if (value.empty())
            throw ConfigSyntaxError(lineNo, "empty value");

        // strip a trailing comment outside quotes
        if (value[0] != '"') {
            auto hash = value.find('#');
            if (hash != std::string::npos)
                value = trim(value.substr(0, hash));
        }
        entry.rawValue = value;

        if (value[0] == '"') {
            if (value.size() < 2 || value.back() != '"')
                throw ConfigSyntaxError(lineNo, "unterminated string literal");
            entry.kind = ValueKind::String;
            entry.stringValue = value.substr(1, value.size() - 2);
        } else if (value == "true" || value == "false") {
            entry.kind = ValueKind::Bool;
            entry.boolValue = value == "true";
        } else if (int64_t n = 0; parseInt(value, n)) {
            entry.kind = ValueKind::Int;
            entry.intValue = n;
        } else {
            entry.kind = ValueKind::String;
            entry.stringValue = value;
        }
        config.entries_.push_back(std::move(entry));
    }
    return config;
}

ScenarioConfig ScenarioConfig::parseFile(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

const ScenarioConfig::Entry* ScenarioConfig::lookup(const std::string& path) const
{
    const Entry* best = nullptr;
    bool bestWildcard = true;
    size_t bestSuffix = 0;
    for (const Entry& entry : entries_) {
        bool wildcard;
        size_t suffixLen;
        if (!matches(entry.pattern, path, wildcard, suffixLen))
            continue;
        if (!best) {
            best = &entry;
            bestWildcard = wildcard;
            bestSuffix = suffixLen;
            continue;
        }
        // exact beats wildcard; longer wildcard suffix beats shorter;
        // later line beats earlier at equal specificity
        if (bestWildcard && !wildcard) {
            best = &entry;
            bestWildcard = false;
            bestSuffix = suffixLen;
        } else if (bestWildcard == wildcard && suffixLen >= bestSuffix) {
            best = &entry;
            bestSuffix = suffixLen;
        }
    }
    return best;
}

std::string ScenarioConfig::getString(const std::string& path, const std::string& fallback) const
{
    const Entry* e = lookup(path);
    if (!e)
        return fallback;
    return e->kind == ValueKind::String ? e->stringValue : e->rawValue;
}

int64_t ScenarioConfig::getInt(const std::string& path, int64_t fallback) const
{
    const Entry* e = lookup(path);
    if (!e)
        return fallback;
    if (e->kind != ValueKind::Int)
        throw ConfigTypeError(e->line, "'" + e->pattern + "' expects an integer, got " +
                                           e->rawValue);
    return e->intValue;
}

uint64_t ScenarioConfig::getUint(const std::string& path, uint64_t fallback) const
{
    int64_t v = getInt(path, static_cast<int64_t>(fallback));
    if (v < 0) {
        const Entry* e = lookup(path);
        throw ConfigTypeError(e ? e->line : 0, "'" + path + "' expects a non-negative integer");
    }
    return static_cast<uint64_t>(v);
}

bool ScenarioConfig::getBool(const std::string& path, bool fallback) const
{
    const Entry* e = lookup(path);
    if (!e)
        return fallback;
    if (e->kind != ValueKind::Bool)
        throw ConfigTypeError(e->line,
                              "'" + e->pattern + "' expects true or false, got " + e->rawValue);
    return e->boolValue;
}

std::vector<int> ScenarioConfig::collectIndices(const std::string& prefix) const
{
    std::vector<int> out;
    for (const Entry& entry : entries_) {
        std::string p = entry.pattern;
        if (p.rfind("**.", 0) == 0)
            p = p.substr(3);
        if (p.rfind(prefix, 0) != 0)
            continue;
        size_t pos = prefix.size();
        size_t end = p.find(']', pos);
        if (end == std::string::npos || end == pos)
            continue;
        int64_t idx;
        if (!parseInt(p.substr(pos, end - pos), idx))
            continue;
        out.push_back(static_cast<int>(idx));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace wsnemu
