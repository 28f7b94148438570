#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

/// Small text helpers shared by the file readers and writers.
namespace slp::text {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

/// Full-match parse; nullopt on trailing garbage. Accepts "nan"/"inf" spellings.
std::optional<double> parse_double(std::string_view s);

/// Shortest representation that round-trips exactly.
std::string format_double(double value);
std::string format_fixed(double value, int decimals);

/// 64-bit FNV-1a, stable across platforms; used for config and data digests.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 14695981039346656037ULL);
std::string hex64(std::uint64_t value);

}  // namespace slp::text
