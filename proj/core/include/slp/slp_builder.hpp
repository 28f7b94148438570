#pragma once

#include "slp/ingestion.hpp"
#include "slp/model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace slp {

/// Per-slot mean over the series whose slot is Valid, on the grid of `year`
/// (defaults to the first series' year). Series from another year are shifted by
/// a whole number of weeks so weekdays line up; days falling outside the target
/// year are dropped. Throws ConfigError on an empty list.
AggregateSeries aggregate(std::span<const ScaledSeries> series, std::optional<int> year = std::nullopt);
AggregateSeries aggregate(std::span<const ScaledSeries* const> series, std::optional<int> year = std::nullopt);
AggregateSeries aggregate(std::span<const ScaledSeries> pool, std::span<const std::size_t> indices,
                          std::optional<int> year = std::nullopt);

inline constexpr int kDefaultCurveDegree = 4;

/// Least-squares polynomial through the daily energies against the normalized
/// day of year, rescaled to a mean of 1. Throws NumericError when fewer than
/// degree + 1 distinct days carry data or when the fitted curve is not positive.
DynamisationCurve fit_dynamisation(const AggregateSeries& agg, int degree = kDefaultCurveDegree);

/// Removes the yearly seasonality: divides (multiplicative) or subtracts
/// level * (d - 1) (additive) day by day.
AggregateSeries detrend_days(const AggregateSeries& agg, const DynamisationCurve& curve,
                             Composition composition = Composition::Multiplicative, double level_kw = 0.0);

/// Quarter-hourly mean per (season, day type), each day weighted by its number
/// of contributors at the slot. Throws DataError naming an empty bucket.
ProfileSet build_daily_profiles(const AggregateSeries& detrended, const CalendarConfig& calendar);

/// Mean of the nonempty slots, kW.
double mean_level(const AggregateSeries& agg);

/// Full year of the model. Delegates to assemble_blended when a transition is configured.
YearSeries assemble(const SlpModel& model, int year);

/// Hard-boundary assembly, ignoring any configured transition.
YearSeries assemble_conventional(const SlpModel& model, int year);

struct BuildOptions {
    int degree = kDefaultCurveDegree;
    Composition composition = Composition::Multiplicative;
};

/// aggregate-independent part of the build: curve, detrending, profiles.
SlpModel build_slp(const AggregateSeries& agg, const CalendarConfig& calendar, const BuildOptions& options = {});

}  // namespace slp
