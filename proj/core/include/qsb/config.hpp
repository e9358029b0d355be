#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace qsb {

// key = value configuration with '#' comments.  Lookups are typed and name
// the offending key in every failure, since a config error message that
// doesn't say which key is at fault costs a debugging round trip.
class Config {
public:
    Config() = default;
    static Config from_file(const std::string& path);
    static Config from_stream(std::istream& in);

    // Last writer wins; CLI overrides call this after the file is loaded.
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string require_string(const std::string& key) const;
    double require_double(const std::string& key) const;
    std::uint64_t require_u64(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    // comma-separated lists, for sweep axes
    std::vector<double> get_double_list(const std::string& key) const;          // empty if absent
    std::vector<std::uint64_t> get_u64_list(const std::string& key) const;

    // keys present in the config but never consumed by the caller's schema
    std::vector<std::string> unknown_keys(const std::vector<std::string>& known) const;

private:
    std::map<std::string, std::string> values_;
};

} // namespace qsb
