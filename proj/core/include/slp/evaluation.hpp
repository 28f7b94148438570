#pragma once

#include "slp/enhancements.hpp"
#include "slp/ingestion.hpp"
#include "slp/model.hpp"
#include "slp/slp_builder.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace slp {

/// Mean absolute difference over the slots where the reference is finite.
/// Throws DataError when the grids differ in length or nothing overlaps.
double mae(std::span<const double> model, std::span<const double> reference);

struct EvalReport {
    std::string model_id;
    double mae_kw = 0.0;
    std::optional<std::vector<double>> residuals;  // model - reference
    std::map<std::string, std::string> metadata;
};

struct NamedSeries {
    std::string id;
    YearSeries series;
};

/// Digest of the aggregate's values and contributor counts.
std::string data_hash(const AggregateSeries& agg);

/// MAE of every model against the aggregate, ascending (ties by id).
std::vector<EvalReport> compare_models(const AggregateSeries& agg, std::span<const NamedSeries> models,
                                       bool keep_residuals = false);

struct ShareOptions {
    std::vector<double> shares{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    int repeats = 10;
    SavgolParams filter{};
    std::uint64_t seed = 1;
    BuildOptions build{};
    CalendarConfig calendar{};
};

struct ShareCurve {
    std::vector<double> shares;
    std::vector<double> mae_filtered;
    std::vector<double> mae_unfiltered;
    int repeats = 0;
    std::uint64_t seed = 0;
    /// subsamples[share][repeat] = sorted pool indices used.
    std::vector<std::vector<std::vector<std::size_t>>> subsamples;
};

/// For every share and repeat, draws a subsample of the pool without
/// replacement, builds the profile model with and without smoothing of the
/// daily profiles, and averages the MAE against the unfiltered full-pool model.
ShareCurve share_experiment(std::span<const ScaledSeries> pool, const ShareOptions& options);

/// Interior shares whose divided second difference of MAE exceeds the
/// threshold in absolute value (>= for an explicit threshold). The default
/// threshold is twice the median absolute second difference.
std::vector<double> kink_report(std::span<const double> shares, std::span<const double> mae,
                                std::optional<double> threshold = std::nullopt);
std::vector<double> kink_report(const ShareCurve& curve, std::optional<double> threshold = std::nullopt);

struct DateRange {
    Date start;
    Date end;  // inclusive
};

struct DayTypeComparison {
    DayType day_type;
    std::optional<DailyProfile> profile_a;
    std::optional<DailyProfile> profile_b;
    int days_a = 0;
    int days_b = 0;
};

/// Mean daily profile per day type inside each window, over all Valid points of
/// the (already scaled) series. Throws DataError if a window holds no data.
std::array<DayTypeComparison, 3> window_compare(std::span<const ScaledSeries> series, const DateRange& window_a,
                                                const DateRange& window_b, const CalendarConfig& calendar);

}  // namespace slp
