#include "slp/enhancements.hpp"

#include "slp/errors.hpp"
#include "slp/evaluation.hpp"
#include "slp/slp_builder.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>

namespace slp {

namespace {

struct ResolvedWindow {
    Date center;
    Season from;
    Season to;
};

std::optional<Date> in_year(std::chrono::month_day md, int year) {
    const std::chrono::year_month_day ymd{std::chrono::year{year}, md.month(), md.day()};
    if (ymd.ok()) return Date{ymd};
    // Feb 29 outside a leap year.
    return Date{std::chrono::year{year} / md.month() / std::chrono::last};
}

std::vector<ResolvedWindow> resolve(const TransitionConfig& config, int year) {
    std::vector<ResolvedWindow> out;
    for (int y = year - 1; y <= year + 1; ++y)
        for (const auto& t : config.transitions) out.push_back({*in_year(t.at, y), t.from, t.to});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.center < b.center; });
    for (std::size_t i = 1; i < out.size(); ++i) {
        const auto gap = static_cast<double>((out[i].center - out[i - 1].center).count());
        if (gap < config.duration_days || gap == 0.0) throw ConfigError("season transition windows overlap");
    }
    return out;
}

}  // namespace

double alpha_at(Date date, Date transition, double duration_days) {
    if (duration_days < 0.0) throw ConfigError("transition duration must be non-negative");
    const auto offset = static_cast<double>((date - transition).count());
    if (duration_days == 0.0) return offset >= 0.0 ? 1.0 : 0.0;
    return std::clamp((offset + duration_days / 2.0) / duration_days, 0.0, 1.0);
}

DailyProfile blend(const DailyProfile& from, const DailyProfile& to, double alpha) {
    std::array<double, kSlotsPerDay> v{};
    for (std::size_t q = 0; q < kSlotsPerDay; ++q) v[q] = (1.0 - alpha) * from[q] + alpha * to[q];
    return DailyProfile(v);
}

YearSeries assemble_blended(const SlpModel& model, int year) {
    if (!model.transition) throw ConfigError("blended assembly needs a transition configuration");
    const TransitionConfig& config = *model.transition;
    const auto windows = resolve(config, year);
    const double half = config.duration_days / 2.0;

    YearSeries out{year, std::vector<double>(static_cast<std::size_t>(slots_in_year(year)))};
    const int n_days = days_in_year(year);
    for (int day = 0; day < n_days; ++day) {
        const Date date = first_day(year) + std::chrono::days{day};
        const DayType type = classify_day(date, model.calendar);

        const ResolvedWindow* active = nullptr;
        for (const auto& w : windows) {
            const auto offset = static_cast<double>((date - w.center).count());
            if (config.duration_days > 0.0 && offset >= -half && offset < half) {
                active = &w;
                break;
            }
        }
        DailyProfile profile = active == nullptr
                                   ? model.profiles.at(season_of(date, model.calendar), type)
                                   : blend(model.profiles.at(active->from, type), model.profiles.at(active->to, type),
                                           alpha_at(date, active->center, config.duration_days));

        const double d = model.curve.at(date);
        for (std::size_t q = 0; q < kSlotsPerDay; ++q) {
            const auto slot = static_cast<std::size_t>(day) * kSlotsPerDay + q;
            out.kw[slot] = model.composition == Composition::Multiplicative ? d * profile[q]
                                                                           : model.level_kw * (d - 1.0) + profile[q];
        }
    }
    return out;
}

DurationSearch search_duration(const AggregateSeries& agg, const SlpModel& model, std::span<const double> candidates) {
    if (candidates.empty()) throw ConfigError("duration search needs at least one candidate");
    std::vector<double> sorted(candidates.begin(), candidates.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    DurationSearch out;
    SlpModel trial = model;
    for (double d : sorted) {
        trial.transition = TransitionConfig::from_calendar(model.calendar, d);
        const YearSeries year = assemble_blended(trial, agg.year);
        out.curve.push_back({d, mae(year.kw, agg.mean_kw)});
    }
    const auto best = std::min_element(out.curve.begin(), out.curve.end(),
                                       [](const auto& a, const auto& b) { return a.mae_kw < b.mae_kw; });
    out.best_duration_days = best->duration_days;
    out.best_mae_kw = best->mae_kw;
    return out;
}

DurationSearch search_duration(const AggregateSeries& agg, const SlpModel& model) {
    std::vector<double> coarse;
    for (int d = 0; d <= 42; d += 3) coarse.push_back(d);
    const DurationSearch first = search_duration(agg, model, coarse);

    std::vector<double> all = coarse;
    for (int d = -3; d <= 3; ++d) {
        const double c = first.best_duration_days + d;
        if (c >= 0.0) all.push_back(c);
    }
    return search_duration(agg, model, all);
}

std::vector<double> savgol_coefficients(const SavgolParams& params) {
    if (params.window < 1 || params.window % 2 == 0) throw ConfigError("Savitzky-Golay window must be odd");
    if (params.polyorder < 0 || params.polyorder >= params.window) {
        throw ConfigError("Savitzky-Golay polyorder must be below the window length");
    }
    const int half = params.window / 2;
    const int cols = params.polyorder + 1;
    Eigen::MatrixXd vander(params.window, cols);
    for (int r = 0; r < params.window; ++r) {
        double power = 1.0;
        for (int c = 0; c < cols; ++c) {
            vander(r, c) = power;
            power *= static_cast<double>(r - half);
        }
    }
    // Row 0 of the pseudo-inverse gives the fitted value at offset 0.
    const Eigen::MatrixXd pinv = vander.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(params.window, params.window));
    std::vector<double> out(static_cast<std::size_t>(params.window));
    for (int j = 0; j < params.window; ++j) out[static_cast<std::size_t>(j)] = pinv(0, j);
    return out;
}

std::vector<double> savgol_smooth(std::span<const double> values, const SavgolParams& params) {
    const auto coef = savgol_coefficients(params);
    const auto n = static_cast<long>(values.size());
    if (params.window > n) throw ConfigError("Savitzky-Golay window is longer than the series");
    const long half = params.window / 2;
    std::vector<double> out(values.size(), 0.0);
    for (long i = 0; i < n; ++i) {
        double acc = 0.0;
        for (long j = -half; j <= half; ++j) {
            const long k = ((i + j) % n + n) % n;
            acc += coef[static_cast<std::size_t>(j + half)] * values[static_cast<std::size_t>(k)];
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

DailyProfile savgol_smooth(const DailyProfile& profile, const SavgolParams& params) {
    auto v = savgol_smooth(std::span<const double>(profile.values()), params);
    for (double& x : v) x = std::max(x, 0.0);
    return DailyProfile(v);
}

ProfileSet savgol_smooth(const ProfileSet& profiles, const SavgolParams& params) {
    ProfileSet out;
    for (Season s : kSeasons)
        for (DayType t : kDayTypes) out.set(s, t, savgol_smooth(profiles.at(s, t), params));
    return out;
}

}  // namespace slp
