#pragma once

#include "slp/calendar.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace slp {

/// Availability-weighted mean of many scaled series on one civil year's grid.
/// Slots without contributors hold NaN.
struct AggregateSeries {
    int year = 0;
    std::vector<double> mean_kw;
    std::vector<std::uint32_t> contributors;
    std::size_t n_series = 0;

    std::size_t size() const noexcept { return mean_kw.size(); }
    int days() const noexcept { return static_cast<int>(mean_kw.size() / kSlotsPerDay); }
    bool has(std::size_t slot) const { return contributors[slot] > 0; }
    Date date(int day) const { return first_day(year) + std::chrono::days{day}; }
    Timestamp timestamp(std::size_t slot) const {
        return Timestamp::from(first_day(year)) + static_cast<std::int64_t>(slot);
    }
    /// True when all 96 slots of the day have contributors.
    bool complete_day(int day) const;
    std::span<const double> day_values(int day) const {
        return std::span<const double>(mean_kw).subspan(static_cast<std::size_t>(day) * kSlotsPerDay, kSlotsPerDay);
    }
};

/// A quarter-hour load series covering one civil year.
struct YearSeries {
    int year = 0;
    std::vector<double> kw;

    std::span<const double> day_values(int day) const {
        return std::span<const double>(kw).subspan(static_cast<std::size_t>(day) * kSlotsPerDay, kSlotsPerDay);
    }
    double energy_kwh() const;
};

/// Yearly seasonality: polynomial in the normalized day-of-year x in [0, 1),
/// coefficients in ascending powers. Curves produced by fit_dynamisation average
/// to 1 over the 365 day grid points.
class DynamisationCurve {
public:
    DynamisationCurve() : coefficients_{1.0} {}
    explicit DynamisationCurve(std::vector<double> coefficients);

    double operator()(double x) const;
    double at(Date date) const { return (*this)(year_fraction(date)); }

    const std::vector<double>& coefficients() const noexcept { return coefficients_; }
    int degree() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }

    /// Mean over x = i / 365, i = 0 ... 364.
    double mean() const;
    DynamisationCurve scaled(double factor) const;
    DynamisationCurve normalized() const { return scaled(1.0 / mean()); }

    bool operator==(const DynamisationCurve&) const = default;

private:
    std::vector<double> coefficients_;
};

/// Nine daily profiles, one per (season, day type).
class ProfileSet {
public:
    ProfileSet() = default;
    explicit ProfileSet(const DailyProfile& all) { profiles_.fill(all); }

    const DailyProfile& at(Season season, DayType type) const { return profiles_[index(season, type)]; }
    void set(Season season, DayType type, DailyProfile profile) { profiles_[index(season, type)] = std::move(profile); }

    ProfileSet scaled(double factor) const;

    bool operator==(const ProfileSet&) const = default;

    static std::size_t index(Season season, DayType type) {
        return static_cast<std::size_t>(season) * 3 + static_cast<std::size_t>(type);
    }

private:
    std::array<DailyProfile, 9> profiles_{};
};

/// One season changeover at a calendar day of the year.
struct SeasonTransition {
    std::chrono::month_day at;
    Season from;
    Season to;

    bool operator==(const SeasonTransition&) const = default;
};

struct TransitionConfig {
    std::vector<SeasonTransition> transitions;
    double duration_days = 0.0;

    /// Changeovers implied by the calendar's season boundaries.
    static TransitionConfig from_calendar(const CalendarConfig& calendar, double duration_days);

    bool operator==(const TransitionConfig&) const = default;
};

enum class Composition : std::uint8_t { Multiplicative, Additive };

/// Conventional profile model: X(t) = d(day) * profile[season, day type][slot].
/// In the additive variant X(t) = level * (d(day) - 1) + profile[...][slot].
struct SlpModel {
    DynamisationCurve curve;
    ProfileSet profiles;
    CalendarConfig calendar;
    std::optional<TransitionConfig> transition;
    Composition composition = Composition::Multiplicative;
    /// Mean load of the training aggregate, kW; used by the additive variant.
    double level_kw = 0.0;

    bool operator==(const SlpModel&) const = default;
};

}  // namespace slp
