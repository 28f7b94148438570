#include "slp/slp_builder.hpp"

#include "slp/enhancements.hpp"
#include "slp/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace slp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Whole-week shift that moves dates of `from_year` onto `to_year` keeping weekdays.
std::chrono::days week_aligned_shift(int from_year, int to_year) {
    const auto delta = (first_day(to_year) - first_day(from_year)).count();
    const auto weeks = static_cast<long>(std::lround(static_cast<double>(delta) / 7.0));
    return std::chrono::days{weeks * 7};
}

}  // namespace

AggregateSeries aggregate(std::span<const ScaledSeries* const> series, std::optional<int> year) {
    if (series.empty()) throw ConfigError("aggregate needs at least one series");
    AggregateSeries out;
    out.year = year.value_or(series.front()->year);
    out.n_series = series.size();
    const auto n = static_cast<std::size_t>(slots_in_year(out.year));
    std::vector<double> sum(n, 0.0);
    out.contributors.assign(n, 0);

    const int target_days = days_in_year(out.year);
    for (const ScaledSeries* s : series) {
        const RawSeries& raw = s->series;
        if (s->year == out.year && raw.start() == Timestamp::from(first_day(out.year)) && raw.size() == n) {
            for (std::size_t i = 0; i < n; ++i) {
                if (!raw.valid(i)) continue;
                sum[i] += raw.value(i);
                ++out.contributors[i];
            }
            continue;
        }
        const auto shift = week_aligned_shift(s->year, out.year);
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (!raw.valid(i)) continue;
            const Timestamp ts = raw.timestamp(i);
            const Date target = ts.date() + shift;
            const auto day = (target - first_day(out.year)).count();
            if (day < 0 || day >= target_days) continue;
            const auto slot = static_cast<std::size_t>(day) * kSlotsPerDay + static_cast<std::size_t>(ts.slot_of_day());
            sum[slot] += raw.value(i);
            ++out.contributors[slot];
        }
    }
    out.mean_kw.assign(n, kNaN);
    for (std::size_t i = 0; i < n; ++i)
        if (out.contributors[i] > 0) out.mean_kw[i] = sum[i] / out.contributors[i];
    return out;
}

AggregateSeries aggregate(std::span<const ScaledSeries> series, std::optional<int> year) {
    std::vector<const ScaledSeries*> ptrs;
    ptrs.reserve(series.size());
    for (const auto& s : series) ptrs.push_back(&s);
    return aggregate(std::span<const ScaledSeries* const>(ptrs), year);
}

AggregateSeries aggregate(std::span<const ScaledSeries> pool, std::span<const std::size_t> indices,
                          std::optional<int> year) {
    std::vector<const ScaledSeries*> ptrs;
    ptrs.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= pool.size()) throw ConfigError("aggregate index out of range");
        ptrs.push_back(&pool[i]);
    }
    return aggregate(std::span<const ScaledSeries* const>(ptrs), year);
}

DynamisationCurve fit_dynamisation(const AggregateSeries& agg, int degree) {
    if (degree < 0) throw ConfigError("polynomial degree must be non-negative");
    std::vector<double> xs, energies;
    std::set<int> distinct;
    for (int day = 0; day < agg.days(); ++day) {
        double sum = 0.0;
        int count = 0;
        for (std::size_t q = 0; q < kSlotsPerDay; ++q) {
            const auto slot = static_cast<std::size_t>(day) * kSlotsPerDay + q;
            if (!agg.has(slot)) continue;
            sum += agg.mean_kw[slot];
            ++count;
        }
        if (count == 0) continue;
        const Date date = agg.date(day);
        xs.push_back(year_fraction(date));
        energies.push_back(sum / count * 24.0);
        distinct.insert(normalized_day_index(date));
    }
    const auto p = static_cast<std::size_t>(degree) + 1;
    if (distinct.size() < p) {
        throw NumericError("dynamisation fit of degree " + std::to_string(degree) + " needs " + std::to_string(p) +
                           " distinct days with data, got " + std::to_string(distinct.size()));
    }

    Eigen::MatrixXd design(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(p));
    Eigen::VectorXd target(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t r = 0; r < xs.size(); ++r) {
        double power = 1.0;
        for (std::size_t c = 0; c < p; ++c) {
            design(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = power;
            power *= xs[r];
        }
        target(static_cast<Eigen::Index>(r)) = energies[r];
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < static_cast<Eigen::Index>(p)) throw NumericError("dynamisation fit is rank deficient");
    const Eigen::VectorXd coef = qr.solve(target);

    DynamisationCurve curve(std::vector<double>(coef.data(), coef.data() + coef.size()));
    const double mean = curve.mean();
    if (!(mean > 0.0)) throw NumericError("dynamisation fit has non-positive mean");
    curve = curve.scaled(1.0 / mean);
    for (int i = 0; i < 3650; ++i) {
        if (!(curve(i / 3650.0) > 0.0)) throw NumericError("fitted dynamisation curve is not strictly positive");
    }
    return curve;
}

AggregateSeries detrend_days(const AggregateSeries& agg, const DynamisationCurve& curve, Composition composition,
                             double level_kw) {
    AggregateSeries out = agg;
    for (int day = 0; day < agg.days(); ++day) {
        const double d = curve.at(agg.date(day));
        if (composition == Composition::Multiplicative && !(d > 0.0)) {
            throw NumericError("dynamisation factor is not positive on " + format_date(agg.date(day)));
        }
        for (std::size_t q = 0; q < kSlotsPerDay; ++q) {
            const auto slot = static_cast<std::size_t>(day) * kSlotsPerDay + q;
            if (!agg.has(slot)) continue;
            out.mean_kw[slot] = composition == Composition::Multiplicative ? agg.mean_kw[slot] / d
                                                                           : agg.mean_kw[slot] - level_kw * (d - 1.0);
        }
    }
    return out;
}

ProfileSet build_daily_profiles(const AggregateSeries& detrended, const CalendarConfig& calendar) {
    std::array<std::array<double, kSlotsPerDay>, 9> sums{};
    std::array<std::array<double, kSlotsPerDay>, 9> weights{};
    std::array<int, 9> days{};
    for (int day = 0; day < detrended.days(); ++day) {
        const Date date = detrended.date(day);
        const std::size_t bucket = ProfileSet::index(season_of(date, calendar), classify_day(date, calendar));
        bool any = false;
        for (std::size_t q = 0; q < kSlotsPerDay; ++q) {
            const auto slot = static_cast<std::size_t>(day) * kSlotsPerDay + q;
            if (!detrended.has(slot)) continue;
            const double w = detrended.contributors[slot];
            sums[bucket][q] += w * detrended.mean_kw[slot];
            weights[bucket][q] += w;
            any = true;
        }
        if (any) ++days[bucket];
    }

    ProfileSet out;
    for (Season s : kSeasons) {
        for (DayType t : kDayTypes) {
            const std::size_t b = ProfileSet::index(s, t);
            const std::string name = std::string(to_string(s)) + "/" + std::string(to_string(t));
            if (days[b] == 0) throw DataError("no contributing day for profile bucket " + name);
            std::array<double, kSlotsPerDay> v{};
            for (std::size_t q = 0; q < kSlotsPerDay; ++q) {
                if (weights[b][q] == 0.0) {
                    throw DataError("profile bucket " + name + " has no data at slot " + std::to_string(q));
                }
                v[q] = sums[b][q] / weights[b][q];
            }
            out.set(s, t, DailyProfile(v));
        }
    }
    return out;
}

double mean_level(const AggregateSeries& agg) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < agg.size(); ++i) {
        if (!agg.has(i)) continue;
        sum += agg.mean_kw[i];
        ++n;
    }
    if (n == 0) throw DataError("aggregate has no data");
    return sum / static_cast<double>(n);
}

YearSeries assemble_conventional(const SlpModel& model, int year) {
    YearSeries out{year, std::vector<double>(static_cast<std::size_t>(slots_in_year(year)))};
    const int n_days = days_in_year(year);
    for (int day = 0; day < n_days; ++day) {
        const Date date = first_day(year) + std::chrono::days{day};
        const DailyProfile& p = model.profiles.at(season_of(date, model.calendar), classify_day(date, model.calendar));
        const double d = model.curve.at(date);
        for (std::size_t q = 0; q < kSlotsPerDay; ++q) {
            const auto slot = static_cast<std::size_t>(day) * kSlotsPerDay + q;
            out.kw[slot] = model.composition == Composition::Multiplicative ? d * p[q]
                                                                           : model.level_kw * (d - 1.0) + p[q];
        }
    }
    return out;
}

YearSeries assemble(const SlpModel& model, int year) {
    if (model.transition) return assemble_blended(model, year);
    return assemble_conventional(model, year);
}

SlpModel build_slp(const AggregateSeries& agg, const CalendarConfig& calendar, const BuildOptions& options) {
    SlpModel model;
    model.calendar = calendar;
    model.composition = options.composition;
    model.level_kw = mean_level(agg);
    model.curve = fit_dynamisation(agg, options.degree);
    model.profiles = build_daily_profiles(detrend_days(agg, model.curve, options.composition, model.level_kw), calendar);
    return model;
}

}  // namespace slp
