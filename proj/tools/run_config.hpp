#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace slp::cli {

/// Everything a command needs besides its name. Paths in a config file are
/// relative to that file; paths given on the command line are relative to the
/// working directory.
struct RunConfig {
    std::filesystem::path manifest;
    std::filesystem::path calendar;    // holiday list (.txt) or calendar JSON (.json)
    std::filesystem::path exclusions;  // CSV of exclusion windows
    std::filesystem::path out = "out";
    std::uint64_t seed = 1;
    std::map<std::string, std::string> params;

    /// Hex digest of the canonical form; embedded in every artifact.
    std::string hash() const;
    std::string canonical_json() const;

    std::string get(const std::string& key, const std::string& fallback) const;
    int get_int(const std::string& key, int fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;
    bool has(const std::string& key) const { return params.contains(key); }
};

/// Command-line values that take precedence over the config file.
struct Overrides {
    std::optional<std::filesystem::path> config;
    std::optional<std::filesystem::path> manifest;
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;  // key=value
};

/// Reads the optional config file, applies the overrides and checks that every
/// referenced path exists and every parameter key is known. Throws ConfigError.
RunConfig load_run_config(const Overrides& overrides);

/// Keys accepted in "params" and by --set.
const std::vector<std::string>& known_parameters();

}  // namespace slp::cli
