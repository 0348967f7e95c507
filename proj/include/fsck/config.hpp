#pragma once

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fsck/error.hpp"

namespace fsck {

/// Flat `key = value` settings. Later sources override earlier ones; every
/// lookup is recorded so the resolved set can be echoed next to outputs.
class RunConfig {
public:
    static RunConfig parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw Error(ErrorKind::config, "cannot open config file " + path);
        RunConfig c;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            line = strip(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw Error(ErrorKind::config, path + ":" + std::to_string(lineno) + ": expected key = value");
            const std::string key = strip(line.substr(0, eq));
            if (key.empty())
                throw Error(ErrorKind::config, path + ":" + std::to_string(lineno) + ": empty key");
            c.values_[key] = strip(line.substr(eq + 1));
        }
        return c;
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string str(const std::string& key, const std::string& fallback) {
        const auto it = values_.find(key);
        const std::string v = it == values_.end() ? fallback : it->second;
        resolved_[key] = v;
        return v;
    }

    double num(const std::string& key, double fallback) {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            resolved_[key] = format(fallback);
            return fallback;
        }
        const char* s = it->second.c_str();
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(s, &end);
        if (end == s || *end != '\0' || errno == ERANGE || !std::isfinite(v))
            throw Error(ErrorKind::config, "config key " + key + ": '" + it->second + "' is not a number");
        resolved_[key] = it->second;
        return v;
    }

    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        const double v = num(key, static_cast<double>(fallback));
        if (v != std::floor(v) || std::abs(v) > 9.0e15)
            throw Error(ErrorKind::config, "config key " + key + " must be an integer");
        return static_cast<std::int64_t>(v);
    }

    std::size_t count(const std::string& key, std::size_t fallback, std::size_t min = 1) {
        const auto v = integer(key, static_cast<std::int64_t>(fallback));
        if (v < static_cast<std::int64_t>(min))
            throw Error(ErrorKind::config, "config key " + key + " must be at least " + std::to_string(min));
        return static_cast<std::size_t>(v);
    }

    bool flag(const std::string& key, bool fallback) {
        const std::string v = str(key, fallback ? "true" : "false");
        if (v == "true" || v == "1" || v == "yes")
            return true;
        if (v == "false" || v == "0" || v == "no")
            return false;
        throw Error(ErrorKind::config, "config key " + key + " must be true or false");
    }

    std::vector<double> list(const std::string& key, const std::vector<double>& fallback) {
        if (!has(key)) {
            std::string s;
            for (std::size_t i = 0; i < fallback.size(); ++i)
                s += (i ? "," : "") + format(fallback[i]);
            resolved_[key] = s;
            return fallback;
        }
        std::vector<double> out;
        const std::string text = values_.at(key);
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto comma = text.find(',', pos);
            const std::string item = strip(text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
            char* end = nullptr;
            const double v = std::strtod(item.c_str(), &end);
            if (item.empty() || *end != '\0' || !std::isfinite(v))
                throw Error(ErrorKind::config, "config key " + key + ": bad list entry '" + item + "'");
            out.push_back(v);
            if (comma == std::string::npos)
                break;
            pos = comma + 1;
        }
        resolved_[key] = text;
        return out;
    }

    /// Keys given but never read; a typo in a config file should not pass
    /// silently.
    std::vector<std::string> unused() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : values_)
            if (!resolved_.count(k))
                out.push_back(k);
        return out;
    }

    void require_all_used() const {
        const auto u = unused();
        if (!u.empty())
            throw Error(ErrorKind::config, "unknown config key: " + u.front());
    }

    void write_resolved(const std::string& path) const {
        std::ofstream out(path);
        if (!out)
            throw Error(ErrorKind::io, "cannot open " + path + " for writing");
        for (const auto& [k, v] : resolved_)
            out << k << " = " << v << '\n';
    }

    const std::map<std::string, std::string>& resolved() const { return resolved_; }

private:
    static std::string strip(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            return {};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    static std::string format(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    std::map<std::string, std::string> values_;
    std::map<std::string, std::string> resolved_;
};

} // namespace fsck
