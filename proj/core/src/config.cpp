#include "qsb/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "qsb/errors.hpp"

namespace qsb {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& raw) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(raw, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + raw + "' is not a number");
    }
    if (used != raw.size()) throw ConfigError("key '" + key + "': trailing junk in '" + raw + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& raw) {
    if (!raw.empty() && raw[0] == '-')
        throw ConfigError("key '" + key + "': '" + raw + "' is negative");
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(raw, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + raw + "' is not a non-negative integer");
    }
    if (used != raw.size()) throw ConfigError("key '" + key + "': trailing junk in '" + raw + "'");
    return v;
}

std::vector<std::string> split_list(const std::string& raw) {
    std::vector<std::string> parts;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

} // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot open config: " + path);
    return from_stream(in);
}

Config Config::from_stream(std::istream& in) {
    Config config;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        config.set(key, value);
    }
    return config;
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::require_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
}

double Config::require_double(const std::string& key) const {
    return parse_double(key, require_string(key));
}

std::uint64_t Config::require_u64(const std::string& key) const {
    return parse_u64(key, require_string(key));
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(key, it->second);
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_u64(key, it->second);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    throw ConfigError("key '" + key + "': '" + it->second + "' is not a boolean");
}

std::vector<double> Config::get_double_list(const std::string& key) const {
    std::vector<double> out;
    const auto it = values_.find(key);
    if (it == values_.end()) return out;
    for (const std::string& part : split_list(it->second)) out.push_back(parse_double(key, part));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

std::vector<std::uint64_t> Config::get_u64_list(const std::string& key) const {
    std::vector<std::uint64_t> out;
    const auto it = values_.find(key);
    if (it == values_.end()) return out;
    for (const std::string& part : split_list(it->second)) out.push_back(parse_u64(key, part));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

std::vector<std::string> Config::unknown_keys(const std::vector<std::string>& known) const {
    std::vector<std::string> out;
    for (const auto& [key, value] : values_)
        if (std::find(known.begin(), known.end(), key) == known.end()) out.push_back(key);
    return out;
}

} // namespace qsb
