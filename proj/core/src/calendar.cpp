#include "slp/calendar.hpp"

#include "slp/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>

namespace slp {

namespace chr = std::chrono;

namespace {

template <typename T>
bool parse_int(std::string_view text, T& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

chr::year_month_day ymd(Date d) { return chr::year_month_day{d}; }

}  // namespace

Date make_date(int year, unsigned month, unsigned day) {
    const chr::year_month_day value{chr::year{year}, chr::month{month}, chr::day{day}};
    if (!value.ok()) throw ConfigError("invalid calendar date " + std::to_string(year) + "-" +
                                       std::to_string(month) + "-" + std::to_string(day));
    return Date{value};
}

int year_of(Date date) { return static_cast<int>(ymd(date).year()); }
unsigned month_of(Date date) { return static_cast<unsigned>(ymd(date).month()); }
unsigned day_of_month(Date date) { return static_cast<unsigned>(ymd(date).day()); }

int days_in_year(int year) { return chr::year{year}.is_leap() ? 366 : 365; }
int slots_in_year(int year) { return days_in_year(year) * kSlotsPerDay; }
Date first_day(int year) { return Date{chr::year{year} / chr::January / 1}; }

int day_of_year(Date date) { return static_cast<int>((date - first_day(year_of(date))).count()); }

int normalized_day_index(Date date) {
    const int doy = day_of_year(date);
    if (chr::year{year_of(date)}.is_leap() && doy >= 59) return doy - 1;
    return doy;
}

double year_fraction(Date date) { return static_cast<double>(normalized_day_index(date)) / 365.0; }

unsigned iso_weekday(Date date) { return chr::weekday{date}.iso_encoding(); }

IsoWeek iso_week(Date date) {
    const Date thursday = date + chr::days{4 - static_cast<int>(iso_weekday(date))};
    return {year_of(thursday), static_cast<unsigned>(day_of_year(thursday) / 7 + 1)};
}

Date parse_date(std::string_view text) {
    text = trim(text);
    int y = 0;
    unsigned m = 0, d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_int(text.substr(0, 4), y) ||
        !parse_int(text.substr(5, 2), m) || !parse_int(text.substr(8, 2), d)) {
        throw ConfigError("malformed date '" + std::string(text) + "'");
    }
    return make_date(y, m, d);
}

std::string format_date(Date date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year_of(date), month_of(date), day_of_month(date));
    return buf;
}

Timestamp Timestamp::from(Date date, int slot_of_day) {
    return Timestamp(static_cast<std::int64_t>(date.time_since_epoch().count()) * kSlotsPerDay + slot_of_day);
}

Timestamp Timestamp::parse(std::string_view text) {
    text = trim(text);
    if (text.size() < 16 || (text[10] != 'T' && text[10] != ' ') || text[13] != ':') {
        throw ConfigError("malformed timestamp '" + std::string(text) + "'");
    }
    const Date date = parse_date(text.substr(0, 10));
    unsigned hour = 0, minute = 0, second = 0;
    if (!parse_int(text.substr(11, 2), hour) || !parse_int(text.substr(14, 2), minute)) {
        throw ConfigError("malformed timestamp '" + std::string(text) + "'");
    }
    std::string_view rest = text.substr(16);
    if (!rest.empty()) {
        if (rest.size() != 3 || rest[0] != ':' || !parse_int(rest.substr(1), second)) {
            throw ConfigError("malformed timestamp '" + std::string(text) + "'");
        }
    }
    if (hour > 23 || minute > 59 || second != 0 || minute % 15 != 0) {
        throw ConfigError("timestamp '" + std::string(text) + "' is not on the quarter-hour grid");
    }
    return from(date, static_cast<int>(hour * 4 + minute / 15));
}

Date Timestamp::date() const {
    const auto days = slots_ >= 0 ? slots_ / kSlotsPerDay : -((-slots_ + kSlotsPerDay - 1) / kSlotsPerDay);
    return Date{chr::days{days}};
}

int Timestamp::slot_of_day() const {
    const auto r = slots_ % kSlotsPerDay;
    return static_cast<int>(r < 0 ? r + kSlotsPerDay : r);
}

std::string Timestamp::to_string() const {
    const int slot = slot_of_day();
    char buf[8];
    std::snprintf(buf, sizeof buf, "T%02d:%02d", slot / 4, (slot % 4) * 15);
    return format_date(date()) + buf;
}

std::string_view to_string(DayType type) {
    switch (type) {
        case DayType::Workday: return "workday";
        case DayType::Saturday: return "saturday";
        case DayType::Sunday: return "sunday";
    }
    return "?";
}

std::string_view to_string(Season season) {
    switch (season) {
        case Season::Winter: return "winter";
        case Season::Summer: return "summer";
        case Season::Transition: return "transition";
    }
    return "?";
}

DayType parse_day_type(std::string_view text) {
    for (DayType t : kDayTypes)
        if (to_string(t) == text) return t;
    throw ConfigError("unknown day type '" + std::string(text) + "'");
}

Season parse_season(std::string_view text) {
    for (Season s : kSeasons)
        if (to_string(s) == text) return s;
    throw ConfigError("unknown season '" + std::string(text) + "'");
}

std::vector<SeasonBoundary> CalendarConfig::default_boundaries() {
    using namespace std::chrono;
    return {{March / 21, Season::Transition},
            {May / 15, Season::Summer},
            {September / 15, Season::Transition},
            {November / 1, Season::Winter}};
}

CalendarConfig::CalendarConfig() : boundaries_(default_boundaries()) {}

CalendarConfig::CalendarConfig(std::set<Date> holidays, std::vector<SeasonBoundary> boundaries,
                               DayType christmas_eve_rule, DayType new_years_eve_rule)
    : holidays_(std::move(holidays)),
      boundaries_(std::move(boundaries)),
      christmas_eve_rule_(christmas_eve_rule),
      new_years_eve_rule_(new_years_eve_rule) {
    if (boundaries_.empty()) throw ConfigError("calendar needs at least one season boundary");
    std::sort(boundaries_.begin(), boundaries_.end(),
              [](const SeasonBoundary& a, const SeasonBoundary& b) { return a.start < b.start; });
    for (std::size_t i = 0; i < boundaries_.size(); ++i) {
        if (!boundaries_[i].start.ok()) throw ConfigError("invalid season boundary date");
        if (i > 0 && boundaries_[i].start == boundaries_[i - 1].start) {
            throw ConfigError("duplicate season boundary");
        }
    }
}

CalendarConfig CalendarConfig::conventional(std::set<Date> holidays) {
    return CalendarConfig(std::move(holidays), default_boundaries(), DayType::Saturday, DayType::Saturday);
}

CalendarConfig CalendarConfig::with_boundaries(std::vector<SeasonBoundary> boundaries) const {
    return CalendarConfig(holidays_, std::move(boundaries), christmas_eve_rule_, new_years_eve_rule_);
}

CalendarConfig CalendarConfig::with_holidays(std::set<Date> holidays) const {
    return CalendarConfig(std::move(holidays), boundaries_, christmas_eve_rule_, new_years_eve_rule_);
}

CalendarConfig CalendarConfig::with_rules(DayType christmas_eve, DayType new_years_eve) const {
    return CalendarConfig(holidays_, boundaries_, christmas_eve, new_years_eve);
}

DayType classify_day(Date date, const CalendarConfig& config) {
    const unsigned wd = iso_weekday(date);
    if (wd == 7) return DayType::Sunday;
    if (config.is_holiday(date)) return DayType::Sunday;
    if (month_of(date) == 12) {
        const unsigned d = day_of_month(date);
        if (d == 24) return config.christmas_eve_rule();
        if (d == 31) return config.new_years_eve_rule();
    }
    return wd == 6 ? DayType::Saturday : DayType::Workday;
}

Season season_of(Date date, const CalendarConfig& config) {
    const chr::month_day md{chr::month{month_of(date)}, chr::day{day_of_month(date)}};
    const auto& b = config.boundaries();
    auto it = std::upper_bound(b.begin(), b.end(), md,
                               [](const chr::month_day& value, const SeasonBoundary& x) { return value < x.start; });
    if (it == b.begin()) return b.back().season;
    return std::prev(it)->season;
}

std::set<Date> parse_holidays(std::istream& in) {
    std::set<Date> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string_view view = line;
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        try {
            out.insert(parse_date(view));
        } catch (const ConfigError& e) {
            throw ParseError(number, e.what());
        }
    }
    return out;
}

std::set<Date> load_holidays(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open holiday file " + path.string());
    return parse_holidays(in);
}

DailyProfile::DailyProfile(std::span<const double> values) {
    if (values.size() != kSlotsPerDay) {
        throw ConfigError("daily profile needs 96 values, got " + std::to_string(values.size()));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] < 0.0) {
            throw NumericError("daily profile value at slot " + std::to_string(i) + " is negative or not finite");
        }
        values_[i] = values[i];
    }
}

double DailyProfile::energy_kwh() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0) * kHoursPerSlot;
}

}  // namespace slp
