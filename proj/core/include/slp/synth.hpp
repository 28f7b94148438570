#pragma once

#include "slp/fourier_model.hpp"
#include "slp/ingestion.hpp"
#include "slp/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace slp {

/// Gaussian bump on a 24 h circle, used to compose planted daily shapes.
struct Bump {
    double center_hour;
    double width_hours;
    double height_kw;
};

/// base + sum of circular Gaussian bumps, sampled at slot midpoints.
DailyProfile shape_profile(double base_kw, std::span<const Bump> bumps);

struct WeeklyUplift {
    unsigned iso_weekday = 5;  // Friday
    int from_slot = 56;        // 14:00
    int to_slot = 96;          // exclusive
    double factor = 0.2;       // relative increase
};

/// Relative increase over an inclusive date range, e.g. the year-end surge.
struct DateUplift {
    Date first;
    Date last;
    double factor = 0.25;
    int from_slot = 0;
    int to_slot = kSlotsPerDay;
};

struct SynthConfig {
    int n_households = 100;
    int year = 2021;
    std::uint64_t seed = 1;

    /// Planted structure; generate() rescales it so one year holds 1000 kWh.
    SlpModel planted;
    /// When set, households follow this model instead of `planted`.
    std::optional<FourierModel> planted_fourier;

    std::optional<WeeklyUplift> weekly_uplift;
    std::vector<DateUplift> date_uplifts;

    /// Relative std of the per-slot multiplicative lognormal noise.
    double noise = 0.3;
    /// Log-std of the per-household level factor (median 1).
    double level_spread = 0.3;
    /// Std of a per-household circular time shift of the daily shapes, in slots.
    double shift_std_slots = 0.0;
    /// Household habits: short recurring events at household-specific times of
    /// day, applied as a zero-mean-in-expectation relative modulation.
    int habit_events = 0;
    double habit_amplitude = 0.5;
    double habit_width_slots = 1.0;

    double ev_rate = 0.0;
    double pv_rate = 0.0;
    double defect_rate = 0.0;
    /// Share of households with one contiguous gap covering gap_fraction of the year.
    double gap_rate = 0.0;
    double gap_fraction = 0.1;

    /// Throws ConfigError for negative rates, noise or a non-positive planted profile.
    void validate() const;
};

/// Default synthetic planted model: winter/summer/transition shapes with an
/// evening peak that moves later and flattens towards summer, weekend shapes with
/// later mornings and a Sunday midday peak, German federal holidays behaving like
/// Sundays, and season changes on Mar 5, May 30, Sep 1 and Oct 20.
SlpModel realistic_model(int year, std::optional<double> transition_days = 21.0);

/// Season boundaries of realistic_model.
std::vector<SeasonBoundary> realistic_boundaries();

/// Nationwide German public holidays of one year (2017 adds Reformation Day).
std::set<Date> german_federal_holidays(int year);

/// realistic_model with a 1000-household-like noise setup.
SynthConfig realistic_config(int n_households = 300, std::uint64_t seed = 1);

struct InjectedRange {
    std::string kind;  // "ev", "pv", "defect" or "gap"
    std::size_t start = 0;
    std::size_t length = 0;

    bool operator==(const InjectedRange&) const = default;
};

struct HouseholdTruth {
    std::string meter_id;
    double level_factor = 1.0;
    double shift_slots = 0.0;
    std::vector<double> habit_slots;
    bool ev = false;
    bool pv = false;
    bool defect = false;
    bool gap = false;
    std::vector<InjectedRange> injected;

    bool operator==(const HouseholdTruth&) const = default;
};

struct GroundTruth {
    int year = 0;
    std::uint64_t seed = 0;
    /// The planted model after rescaling to 1000 kWh per year.
    SlpModel model;
    std::optional<FourierModel> fourier;
    /// Noise-free mean household year (factor 1, no shift, no injections).
    YearSeries base;
    std::vector<HouseholdTruth> households;
};

struct SynthDataset {
    std::vector<RawSeries> households;
    GroundTruth truth;
};

/// Deterministic per seed; households are independent streams derived from
/// (seed, household index).
SynthDataset generate(const SynthConfig& config);

struct GroundTruthModels {
    SlpModel slp;
    FourierModel fourier;
};

/// Planted model rescaled to 1000 kWh, and the Fourier model closest to the
/// noise-free base year (exactly the planted one when planted_fourier is set).
GroundTruthModels ground_truth(const SynthConfig& config);

}  // namespace slp
