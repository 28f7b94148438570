#pragma once

#include "slp/enhancements.hpp"
#include "slp/season_discovery.hpp"
#include "slp/slp_builder.hpp"

#include <cstdint>
#include <vector>

namespace slp {

struct PipelineOptions {
    /// Holidays, special-day rules and the conventional season boundaries.
    CalendarConfig calendar = CalendarConfig::conventional();
    BuildOptions build{};
    int k_min = 2;
    int k_max = 8;
    std::vector<std::uint64_t> seeds = default_seeds();
    /// Empty: coarse-then-refine duration grid.
    std::vector<double> durations;
    bool smooth = true;
    SavgolParams filter{};
};

/// The three stages compared in the evaluation table plus the smoothed final model.
struct PipelineResult {
    SlpModel baseline;
    ChooseKResult clusters;
    std::vector<DetectedTransition> transitions;
    /// False when the discovered calendar leaves a season without days; the
    /// adapted stage then keeps the baseline calendar.
    bool discovery_applied = true;
    SlpModel adapted;
    DurationSearch duration;
    SlpModel blended;
    SlpModel final_model;
};

/// Baseline build on the given calendar; season discovery on the aggregate's day
/// shapes replaces the season boundaries (adapted); the transition duration
/// search adds blending (blended); savgol smoothing of the daily profiles gives
/// the final model.
PipelineResult run_pipeline(const AggregateSeries& agg, const PipelineOptions& options);

/// Season discovery only: choose_k, then changeovers of the winning clustering.
struct SeasonDiscovery {
    ChooseKResult clusters;
    std::vector<DetectedTransition> transitions;
    CalendarConfig calendar;
};
SeasonDiscovery discover_seasons(const AggregateSeries& agg, const PipelineOptions& options);

}  // namespace slp
