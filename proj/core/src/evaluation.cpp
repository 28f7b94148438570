#include "slp/evaluation.hpp"

#include "slp/errors.hpp"
#include "slp/text.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <random>
#include <set>

namespace slp {

double mae(std::span<const double> model, std::span<const double> reference) {
    if (model.size() != reference.size()) {
        throw DataError("MAE inputs differ in length (" + std::to_string(model.size()) + " vs " +
                        std::to_string(reference.size()) + ")");
    }
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (!std::isfinite(reference[i])) continue;
        sum += std::abs(model[i] - reference[i]);
        ++n;
    }
    if (n == 0) throw DataError("MAE inputs have no overlapping slots");
    return sum / static_cast<double>(n);
}

std::string data_hash(const AggregateSeries& agg) {
    std::uint64_t h = text::fnv1a(std::to_string(agg.year));
    for (std::size_t i = 0; i < agg.size(); ++i) {
        const double v = agg.has(i) ? agg.mean_kw[i] : 0.0;
        char bytes[sizeof(double) + sizeof(std::uint32_t)];
        std::memcpy(bytes, &v, sizeof v);
        std::memcpy(bytes + sizeof v, &agg.contributors[i], sizeof(std::uint32_t));
        h = text::fnv1a(std::string_view(bytes, sizeof bytes), h);
    }
    return text::hex64(h);
}

std::vector<EvalReport> compare_models(const AggregateSeries& agg, std::span<const NamedSeries> models,
                                       bool keep_residuals) {
    if (models.size() < 2) throw ConfigError("model comparison needs at least two models");
    const std::string hash = data_hash(agg);
    std::vector<EvalReport> out;
    for (const auto& m : models) {
        if (m.series.year != agg.year) throw DataError("model '" + m.id + "' covers a different year");
        EvalReport r;
        r.model_id = m.id;
        r.mae_kw = mae(m.series.kw, agg.mean_kw);
        r.metadata["data_hash"] = hash;
        if (keep_residuals) {
            std::vector<double> res(agg.size());
            for (std::size_t i = 0; i < agg.size(); ++i) res[i] = m.series.kw[i] - agg.mean_kw[i];
            r.residuals = std::move(res);
        }
        out.push_back(std::move(r));
    }
    std::stable_sort(out.begin(), out.end(), [](const EvalReport& a, const EvalReport& b) {
        if (a.mae_kw != b.mae_kw) return a.mae_kw < b.mae_kw;
        return a.model_id < b.model_id;
    });
    return out;
}

ShareCurve share_experiment(std::span<const ScaledSeries> pool, const ShareOptions& options) {
    if (pool.empty()) throw ConfigError("share experiment needs a non-empty pool");
    if (options.repeats < 1) throw ConfigError("share experiment needs at least one repeat");
    for (double s : options.shares)
        if (!(s > 0.0) || s > 1.0) throw ConfigError("share " + text::format_double(s) + " is outside (0, 1]");

    const int year = pool.front().year;
    const AggregateSeries full = aggregate(pool, year);
    const SlpModel reference_model = build_slp(full, options.calendar, options.build);
    const YearSeries reference = assemble(reference_model, year);

    ShareCurve out;
    out.shares = options.shares;
    out.repeats = options.repeats;
    out.seed = options.seed;
    std::vector<std::size_t> all(pool.size());
    std::iota(all.begin(), all.end(), std::size_t{0});

    for (std::size_t si = 0; si < options.shares.size(); ++si) {
        const auto m = static_cast<std::size_t>(std::lround(options.shares[si] * static_cast<double>(pool.size())));
        if (m == 0) throw ConfigError("share " + text::format_double(options.shares[si]) + " selects no series");
        double sum_f = 0.0, sum_u = 0.0;
        std::vector<std::vector<std::size_t>> picks;
        for (int r = 0; r < options.repeats; ++r) {
            std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                              static_cast<std::uint32_t>(si), static_cast<std::uint32_t>(r)};
            std::mt19937_64 rng(seq);
            std::vector<std::size_t> idx = all;
            std::shuffle(idx.begin(), idx.end(), rng);
            idx.resize(m);
            std::sort(idx.begin(), idx.end());

            const AggregateSeries sub = aggregate(pool, idx, year);
            SlpModel model = build_slp(sub, options.calendar, options.build);
            sum_u += mae(assemble(model, year).kw, reference.kw);
            model.profiles = savgol_smooth(model.profiles, options.filter);
            sum_f += mae(assemble(model, year).kw, reference.kw);
            picks.push_back(std::move(idx));
        }
        out.mae_unfiltered.push_back(sum_u / options.repeats);
        out.mae_filtered.push_back(sum_f / options.repeats);
        out.subsamples.push_back(std::move(picks));
    }
    return out;
}

std::vector<double> kink_report(std::span<const double> shares, std::span<const double> values,
                                std::optional<double> threshold) {
    if (shares.size() != values.size()) throw ConfigError("kink report inputs differ in length");
    if (shares.size() < 4) throw ConfigError("kink report needs at least four points");
    std::vector<double> second;
    for (std::size_t i = 1; i + 1 < shares.size(); ++i) {
        const double left = (values[i] - values[i - 1]) / (shares[i] - shares[i - 1]);
        const double right = (values[i + 1] - values[i]) / (shares[i + 1] - shares[i]);
        second.push_back(std::abs(2.0 * (right - left) / (shares[i + 1] - shares[i - 1])));
    }

    std::vector<double> out;
    if (threshold) {
        for (std::size_t i = 0; i < second.size(); ++i)
            if (second[i] >= *threshold) out.push_back(shares[i + 1]);
        return out;
    }
    std::vector<double> sorted = second;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    const double median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    // Floor against rounding noise on straight segments.
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    const double limit = std::max(2.0 * median, 1e-9 * scale);
    for (std::size_t i = 0; i < second.size(); ++i)
        if (second[i] > limit) out.push_back(shares[i + 1]);
    return out;
}

std::vector<double> kink_report(const ShareCurve& curve, std::optional<double> threshold) {
    return kink_report(curve.shares, curve.mae_unfiltered, threshold);
}

std::array<DayTypeComparison, 3> window_compare(std::span<const ScaledSeries> series, const DateRange& window_a,
                                                const DateRange& window_b, const CalendarConfig& calendar) {
    struct Acc {
        std::array<std::array<double, kSlotsPerDay>, 3> sum{};
        std::array<std::array<double, kSlotsPerDay>, 3> n{};
        std::array<std::set<Date>, 3> days;
        std::size_t points = 0;
    };
    auto collect = [&](const DateRange& w) {
        if (w.end < w.start) throw ConfigError("comparison window ends before it starts");
        Acc acc;
        for (const auto& s : series) {
            const RawSeries& raw = s.series;
            for (std::size_t i = 0; i < raw.size(); ++i) {
                if (!raw.valid(i)) continue;
                const Timestamp ts = raw.timestamp(i);
                const Date d = ts.date();
                if (d < w.start || d > w.end) continue;
                const auto t = static_cast<std::size_t>(classify_day(d, calendar));
                const auto q = static_cast<std::size_t>(ts.slot_of_day());
                acc.sum[t][q] += raw.value(i);
                acc.n[t][q] += 1.0;
                acc.days[t].insert(d);
                ++acc.points;
            }
        }
        if (acc.points == 0) {
            throw DataError("comparison window " + format_date(w.start) + ".." + format_date(w.end) + " holds no data");
        }
        return acc;
    };
    auto profile = [](const Acc& acc, std::size_t t) -> std::optional<DailyProfile> {
        std::array<double, kSlotsPerDay> v{};
        for (std::size_t q = 0; q < kSlotsPerDay; ++q) {
            if (acc.n[t][q] == 0.0) return std::nullopt;
            v[q] = acc.sum[t][q] / acc.n[t][q];
        }
        return DailyProfile(v);
    };

    const Acc a = collect(window_a);
    const Acc b = collect(window_b);
    std::array<DayTypeComparison, 3> out{};
    for (DayType t : kDayTypes) {
        const auto i = static_cast<std::size_t>(t);
        out[i] = {t, profile(a, i), profile(b, i), static_cast<int>(a.days[i].size()), static_cast<int>(b.days[i].size())};
    }
    return out;
}

}  // namespace slp
