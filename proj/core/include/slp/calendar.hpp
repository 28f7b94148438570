#pragma once

#include <array>
#include <chrono>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace slp {

inline constexpr int kSlotsPerDay = 96;
inline constexpr double kHoursPerSlot = 0.25;

using Date = std::chrono::sys_days;

Date make_date(int year, unsigned month, unsigned day);
int year_of(Date date);
unsigned month_of(Date date);
unsigned day_of_month(Date date);
int days_in_year(int year);
int slots_in_year(int year);
Date first_day(int year);

/// Zero-based day of the civil year (Jan 1 = 0).
int day_of_year(Date date);

/// Day-of-year index in [0, 365) with Feb 29 mapped onto Feb 28, so that leap
/// years share the non-leap index space.
int normalized_day_index(Date date);

/// normalized_day_index / 365, the domain of the dynamisation polynomial.
double year_fraction(Date date);

/// ISO-8601 weekday, Monday = 1 ... Sunday = 7.
unsigned iso_weekday(Date date);

struct IsoWeek {
    int year;
    unsigned week;
    auto operator<=>(const IsoWeek&) const = default;
};
IsoWeek iso_week(Date date);

/// Parses YYYY-MM-DD. Throws ConfigError on malformed input.
Date parse_date(std::string_view text);
std::string format_date(Date date);

/// A point on the quarter-hour grid, counted in slots since 1970-01-01T00:00 of
/// the dataset's fixed time zone.
class Timestamp {
public:
    constexpr Timestamp() = default;
    constexpr explicit Timestamp(std::int64_t slots_since_epoch) : slots_(slots_since_epoch) {}

    static Timestamp from(Date date, int slot_of_day = 0);

    /// Accepts `YYYY-MM-DDTHH:MM[:SS]` (a space may replace the `T`); the minute
    /// must be a multiple of 15 and seconds must be zero.
    static Timestamp parse(std::string_view text);

    constexpr std::int64_t slots() const noexcept { return slots_; }
    Date date() const;
    int slot_of_day() const;
    std::string to_string() const;

    constexpr Timestamp operator+(std::int64_t steps) const { return Timestamp(slots_ + steps); }
    constexpr std::int64_t operator-(Timestamp other) const { return slots_ - other.slots_; }
    constexpr auto operator<=>(const Timestamp&) const = default;

private:
    std::int64_t slots_ = 0;
};

enum class DayType : std::uint8_t { Workday = 0, Saturday = 1, Sunday = 2 };
enum class Season : std::uint8_t { Winter = 0, Summer = 1, Transition = 2 };

inline constexpr std::array<DayType, 3> kDayTypes{DayType::Workday, DayType::Saturday, DayType::Sunday};
inline constexpr std::array<Season, 3> kSeasons{Season::Winter, Season::Summer, Season::Transition};

std::string_view to_string(DayType type);
std::string_view to_string(Season season);
DayType parse_day_type(std::string_view text);
Season parse_season(std::string_view text);

/// Start of a season segment; the segment runs until the next boundary.
struct SeasonBoundary {
    std::chrono::month_day start;
    Season season;

    bool operator==(const SeasonBoundary&) const = default;
};

/// Holidays, season segmentation and special-day rules. Immutable once built.
class CalendarConfig {
public:
    /// Default segmentation (winter from Nov 1, transition from Mar 21, summer from
    /// May 15, transition from Sep 15), no holidays, Dec 24 as Saturday and Dec 31
    /// as Sunday.
    CalendarConfig();

    CalendarConfig(std::set<Date> holidays, std::vector<SeasonBoundary> boundaries,
                   DayType christmas_eve_rule = DayType::Saturday,
                   DayType new_years_eve_rule = DayType::Sunday);

    static std::vector<SeasonBoundary> default_boundaries();

    /// The conventional rule set: both Dec 24 and Dec 31 count as Saturday.
    static CalendarConfig conventional(std::set<Date> holidays = {});

    const std::set<Date>& holidays() const noexcept { return holidays_; }
    const std::vector<SeasonBoundary>& boundaries() const noexcept { return boundaries_; }
    DayType christmas_eve_rule() const noexcept { return christmas_eve_rule_; }
    DayType new_years_eve_rule() const noexcept { return new_years_eve_rule_; }

    bool is_holiday(Date date) const { return holidays_.contains(date); }

    CalendarConfig with_boundaries(std::vector<SeasonBoundary> boundaries) const;
    CalendarConfig with_holidays(std::set<Date> holidays) const;
    CalendarConfig with_rules(DayType christmas_eve, DayType new_years_eve) const;

    bool operator==(const CalendarConfig&) const = default;

private:
    std::set<Date> holidays_;
    std::vector<SeasonBoundary> boundaries_;
    DayType christmas_eve_rule_ = DayType::Saturday;
    DayType new_years_eve_rule_ = DayType::Sunday;
};

/// Effective day type: weekday rule, then holiday -> Sunday, then the Dec 24 /
/// Dec 31 rules (a date that already is a Sunday stays Sunday).
DayType classify_day(Date date, const CalendarConfig& config);

/// Season of the half-open boundary segment containing the date.
Season season_of(Date date, const CalendarConfig& config);

/// Reads one ISO-8601 date per line; `#` starts a comment.
std::set<Date> parse_holidays(std::istream& in);
std::set<Date> load_holidays(const std::filesystem::path& path);

/// 96 quarter-hour values in kW, finite and non-negative.
class DailyProfile {
public:
    DailyProfile() { values_.fill(0.0); }
    explicit DailyProfile(std::span<const double> values);
    explicit DailyProfile(double constant) { values_.fill(constant); }

    double operator[](std::size_t slot) const { return values_[slot]; }
    std::span<const double, kSlotsPerDay> values() const noexcept { return values_; }

    /// Energy of one day with this profile, kWh.
    double energy_kwh() const;

    bool operator==(const DailyProfile&) const = default;

private:
    std::array<double, kSlotsPerDay> values_;
};

}  // namespace slp
