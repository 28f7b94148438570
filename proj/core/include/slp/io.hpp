#pragma once

#include "slp/fourier_model.hpp"
#include "slp/model.hpp"
#include "slp/synth.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace slp::io {

/// Compact, key-sorted JSON; numbers use shortest round-trip formatting.
std::string to_json(const SlpModel& model);
std::string to_json(const FourierModel& model);
std::string to_json(const GroundTruth& truth);

/// Throws ParseError on malformed JSON and ConfigError on missing fields.
SlpModel slp_model_from_json(std::string_view text);
FourierModel fourier_model_from_json(std::string_view text);

/// Calendar part of the model JSON (holidays, boundaries, special-day rules).
std::string calendar_to_json(const CalendarConfig& calendar);
CalendarConfig calendar_from_json(std::string_view text);

/// slot,time,<season>_<daytype> x 9
void write_profiles_csv(std::ostream& out, const ProfileSet& profiles);
/// timestamp,kw
void write_year_csv(std::ostream& out, const YearSeries& series);

/// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace slp::io
