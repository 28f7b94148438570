#include "slp/pipeline.hpp"

#include <array>

namespace slp {

namespace {

bool covers_all_seasons(const CalendarConfig& calendar, const AggregateSeries& agg) {
    std::array<bool, kSeasons.size()> seen{};
    for (int d = 0; d < agg.days(); ++d) seen[static_cast<std::size_t>(season_of(agg.date(d), calendar))] = true;
    for (bool s : seen)
        if (!s) return false;
    return true;
}

}  // namespace

SeasonDiscovery discover_seasons(const AggregateSeries& agg, const PipelineOptions& options) {
    const DayShapeMatrix matrix = build_day_matrix(agg);
    SeasonDiscovery out;
    out.clusters = choose_k(matrix, options.k_min, options.k_max, options.seeds);
    out.transitions = detect_transitions(out.clusters.best, matrix.days(), options.calendar);
    out.calendar = calendar_from_transitions(options.calendar, out.transitions);
    return out;
}

PipelineResult run_pipeline(const AggregateSeries& agg, const PipelineOptions& options) {
    PipelineResult out;
    out.baseline = build_slp(agg, options.calendar, options.build);

    SeasonDiscovery seasons = discover_seasons(agg, options);
    out.clusters = std::move(seasons.clusters);
    out.transitions = std::move(seasons.transitions);
    out.discovery_applied = covers_all_seasons(seasons.calendar, agg);
    out.adapted = out.discovery_applied ? build_slp(agg, seasons.calendar, options.build) : out.baseline;

    out.duration = options.durations.empty() ? search_duration(agg, out.adapted)
                                             : search_duration(agg, out.adapted, options.durations);
    out.blended = out.adapted;
    out.blended.transition = TransitionConfig::from_calendar(out.adapted.calendar, out.duration.best_duration_days);

    out.final_model = out.blended;
    if (options.smooth) out.final_model.profiles = savgol_smooth(out.blended.profiles, options.filter);
    return out;
}

}  // namespace slp
