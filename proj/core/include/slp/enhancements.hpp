#pragma once

#include "slp/model.hpp"

#include <span>
#include <vector>

namespace slp {

/// Blend weight of the incoming season on `date` for a transition centred on
/// `transition` with a window of `duration_days`: a linear ramp from 0 at
/// transition - d/2 to 1 at transition + d/2. A zero duration is the hard
/// switch (0 before the transition day, 1 from it on).
double alpha_at(Date date, Date transition, double duration_days);

/// (1 - alpha) * from + alpha * to, slot by slot.
DailyProfile blend(const DailyProfile& from, const DailyProfile& to, double alpha);

/// Like assemble_conventional, but days inside a transition window use the
/// blend of the outgoing and incoming season profiles of their day type.
/// Throws ConfigError when windows overlap.
YearSeries assemble_blended(const SlpModel& model, int year);

struct DurationPoint {
    double duration_days;
    double mae_kw;
};

struct DurationSearch {
    double best_duration_days = 0.0;
    double best_mae_kw = 0.0;
    std::vector<DurationPoint> curve;  // sorted by duration
};

/// Evaluates every candidate duration against the aggregate (transitions taken
/// from the model's calendar). Ties go to the shorter duration.
DurationSearch search_duration(const AggregateSeries& agg, const SlpModel& model, std::span<const double> candidates);

/// Coarse grid 0, 3, ..., 42 days, then every day within +-3 of the coarse optimum.
DurationSearch search_duration(const AggregateSeries& agg, const SlpModel& model);

struct SavgolParams {
    int window = 11;
    int polyorder = 3;
};

/// Smoothing weights for offsets -h ... h (h = window / 2). They sum to 1.
std::vector<double> savgol_coefficients(const SavgolParams& params);

/// Savitzky-Golay smoothing with wrap-around at the ends (a daily profile is
/// periodic over midnight). Throws ConfigError for an even window, a polyorder
/// not below the window, or a window longer than the input.
std::vector<double> savgol_smooth(std::span<const double> values, const SavgolParams& params = {});

/// Smoothed profile; values that would dip below zero are clamped to zero.
DailyProfile savgol_smooth(const DailyProfile& profile, const SavgolParams& params = {});
ProfileSet savgol_smooth(const ProfileSet& profiles, const SavgolParams& params = {});

}  // namespace slp
