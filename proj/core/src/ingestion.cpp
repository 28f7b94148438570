#include "slp/ingestion.hpp"

#include "slp/errors.hpp"
#include "slp/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

namespace slp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool observed(const RawSeries& s, std::size_t i) { return std::isfinite(s.value(i)); }

double quantile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

}  // namespace

std::string_view to_string(Quality q) {
    switch (q) {
        case Quality::Valid: return "valid";
        case Quality::Missing: return "missing";
        case Quality::Defective: return "defective";
        case Quality::Excluded: return "excluded";
    }
    return "?";
}

RawSeries::RawSeries(std::string meter_id, Timestamp start, std::vector<double> values, std::vector<Quality> quality)
    : meter_id_(std::move(meter_id)), start_(start), values_(std::move(values)), quality_(std::move(quality)) {
    if (values_.size() != quality_.size()) throw ConfigError("series values and flags differ in length");
}

std::size_t RawSeries::count(Quality q) const { return static_cast<std::size_t>(std::count(quality_.begin(), quality_.end(), q)); }

RawSeries parse_series(std::istream& in, std::string meter_id) {
    std::map<Timestamp, double> rows;
    std::string line;
    std::size_t number = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++number;
        std::string_view view = text::trim(line);
        if (view.empty() || view.front() == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        const auto comma = view.find(',');
        if (comma == std::string_view::npos) throw ParseError(number, "expected 'timestamp,value_kW'");
        Timestamp ts;
        try {
            ts = Timestamp::parse(view.substr(0, comma));
        } catch (const ConfigError& e) {
            throw ParseError(number, e.what());
        }
        const auto value = text::parse_double(view.substr(comma + 1));
        if (!value || !std::isfinite(*value)) {
            throw ParseError(number, "non-numeric load value '" + std::string(text::trim(view.substr(comma + 1))) + "'");
        }
        if (!rows.emplace(ts, *value).second) throw ParseError(number, "duplicate timestamp " + ts.to_string());
    }
    if (rows.empty()) return RawSeries(std::move(meter_id), Timestamp{}, {}, {});

    const Timestamp start = rows.begin()->first;
    const auto n = static_cast<std::size_t>(rows.rbegin()->first - start + 1);
    std::vector<double> values(n, kNaN);
    std::vector<Quality> flags(n, Quality::Missing);
    for (const auto& [ts, v] : rows) {
        const auto i = static_cast<std::size_t>(ts - start);
        values[i] = v;
        flags[i] = Quality::Valid;
    }
    return RawSeries(std::move(meter_id), start, std::move(values), std::move(flags));
}

RawSeries read_series(const std::filesystem::path& path, std::string meter_id) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open meter file " + path.string());
    try {
        return parse_series(in, std::move(meter_id));
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path.filename().string() + ": " + e.what());
    }
}

void write_series(std::ostream& out, const RawSeries& series) {
    out << "timestamp,value_kW\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!observed(series, i)) continue;
        out << series.timestamp(i).to_string() << ',' << text::format_double(series.value(i)) << '\n';
    }
}

RawSeries flag_defects(const RawSeries& series, const QualityRules& rules) {
    RawSeries out = series;
    auto& flags = out.mutable_flags();
    const std::size_t n = series.size();

    if (rules.reject_negative) {
        for (std::size_t i = 0; i < n; ++i)
            if (observed(series, i) && series.value(i) < 0.0 && flags[i] == Quality::Valid) flags[i] = Quality::Defective;
    }

    // Stuck meter: identical nonzero observed values in consecutive slots.
    std::size_t i = 0;
    while (i < n) {
        if (!observed(series, i) || series.value(i) == 0.0) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < n && observed(series, j) && series.value(j) == series.value(i)) ++j;
        if (j - i > rules.max_constant_run) {
            for (std::size_t k = i; k < j; ++k)
                if (flags[k] == Quality::Valid) flags[k] = Quality::Defective;
        }
        i = j;
    }

    if (rules.spike_factor > 0.0) {
        std::vector<double> seen;
        seen.reserve(n);
        for (std::size_t k = 0; k < n; ++k)
            if (observed(series, k)) seen.push_back(series.value(k));
        const double q = quantile(std::move(seen), rules.spike_quantile);
        if (q > 0.0) {
            const double limit = rules.spike_factor * q;
            for (std::size_t k = 0; k < n; ++k)
                if (observed(series, k) && series.value(k) > limit && flags[k] == Quality::Valid)
                    flags[k] = Quality::Defective;
        }
    }
    return out;
}

bool has_feed_in(const RawSeries& series, const ProsumerRules& rules) {
    for (std::size_t i = 0; i < series.size(); ++i)
        if (observed(series, i) && series.value(i) < rules.feed_in_threshold_kw) return true;
    return false;
}

bool has_ev_charging(const RawSeries& series, const ProsumerRules& rules) {
    std::vector<double> seen;
    seen.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        if (observed(series, i)) seen.push_back(series.value(i));
    if (seen.empty()) return false;
    const double level = quantile(std::move(seen), 0.5) + rules.ev_level_above_median_kw;

    std::size_t blocks = 0, run = 0;
    for (std::size_t i = 0; i <= series.size(); ++i) {
        const bool high = i < series.size() && observed(series, i) && series.value(i) >= level;
        if (high) {
            ++run;
            continue;
        }
        if (run >= rules.ev_min_block_slots) ++blocks;
        run = 0;
    }
    return blocks >= rules.ev_min_occurrences;
}

bool is_prosumer(const RawSeries& series, const ProsumerRules& rules) {
    return has_feed_in(series, rules) || has_ev_charging(series, rules);
}

std::vector<ExclusionWindow> parse_exclusions(std::istream& in) {
    std::vector<ExclusionWindow> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string_view view = text::trim(line);
        if (view.empty() || view.front() == '#') continue;
        const auto fields = text::split(view, ',');
        if (fields.size() < 2) throw ParseError(number, "expected 'start,end[,label]'");
        try {
            ExclusionWindow w{parse_date(fields[0]), parse_date(fields[1]),
                              fields.size() > 2 ? std::string(text::trim(fields[2])) : std::string{}};
            if (w.end < w.start) throw ParseError(number, "exclusion window ends before it starts");
            out.push_back(std::move(w));
        } catch (const ConfigError& e) {
            throw ParseError(number, e.what());
        }
    }
    return out;
}

std::vector<ExclusionWindow> load_exclusions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open exclusion file " + path.string());
    return parse_exclusions(in);
}

RawSeries apply_exclusions(const RawSeries& series, const std::vector<ExclusionWindow>& windows) {
    RawSeries out = series;
    if (windows.empty() || series.empty()) return out;
    auto& flags = out.mutable_flags();
    for (const auto& w : windows) {
        if (w.end < w.start) throw ConfigError("exclusion window '" + w.label + "' ends before it starts");
        const std::int64_t lo = std::max<std::int64_t>(0, Timestamp::from(w.start) - series.start());
        const std::int64_t hi =
            std::min<std::int64_t>(static_cast<std::int64_t>(series.size()), Timestamp::from(w.end + std::chrono::days{1}) - series.start());
        for (std::int64_t i = lo; i < hi; ++i) flags[static_cast<std::size_t>(i)] = Quality::Excluded;
    }
    return out;
}

RawSeries slice_year(const RawSeries& series, int year) {
    const Timestamp start = Timestamp::from(first_day(year));
    const auto n = static_cast<std::size_t>(slots_in_year(year));
    std::vector<double> values(n, kNaN);
    std::vector<Quality> flags(n, Quality::Missing);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t src = (start + static_cast<std::int64_t>(i)) - series.start();
        if (src < 0 || src >= static_cast<std::int64_t>(series.size())) continue;
        values[i] = series.value(static_cast<std::size_t>(src));
        flags[i] = series.quality(static_cast<std::size_t>(src));
    }
    return RawSeries(series.meter_id(), start, std::move(values), std::move(flags));
}

double coverage(const RawSeries& series, int year) {
    const Timestamp start = Timestamp::from(first_day(year));
    const Timestamp end = Timestamp::from(first_day(year + 1));
    std::size_t valid = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const Timestamp ts = series.timestamp(i);
        if (ts >= start && ts < end && series.valid(i)) ++valid;
    }
    return static_cast<double>(valid) / static_cast<double>(slots_in_year(year));
}

ScaledSeries scale_to_annual(const RawSeries& series, double target_kwh) {
    if (series.empty()) throw DataError("series '" + series.meter_id() + "' is empty");
    return scale_to_annual(series, year_of(series.start().date()), target_kwh);
}

ScaledSeries scale_to_annual(const RawSeries& series, int year, double target_kwh) {
    RawSeries grid = slice_year(series, year);
    const double cov = coverage(grid, year);
    if (cov < kMinCoverage) {
        throw CoverageError(cov, "series '" + series.meter_id() + "' covers " + text::format_fixed(100.0 * cov, 2) +
                                     " % of " + std::to_string(year) + ", below the 95 % minimum");
    }
    double energy = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid.valid(i)) energy += grid.value(i) * kHoursPerSlot;
    if (!(energy > 0.0)) throw DataError("series '" + series.meter_id() + "' has no positive energy");

    const double factor = target_kwh * cov / energy;
    auto& values = grid.mutable_values();
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid.valid(i)) values[i] *= factor;
    return ScaledSeries{std::move(grid), year, factor, cov};
}

IngestResult ingest(std::span<const RawSeries> series, const IngestOptions& options) {
    IngestResult out;
    for (const RawSeries& raw : series) {
        RawSeries grid = slice_year(raw, options.year);
        if (options.drop_prosumers && is_prosumer(grid, options.prosumer)) {
            out.rejected.push_back({raw.meter_id(), "prosumer", has_feed_in(grid, options.prosumer) ? "feed-in" : "ev"});
            continue;
        }
        grid = apply_exclusions(flag_defects(grid, options.quality), options.exclusions);
        try {
            ScaledSeries scaled = scale_to_annual(grid, options.year, options.target_kwh);
            out.defective_slots.push_back(scaled.series.count(Quality::Defective));
            out.accepted.push_back(std::move(scaled));
        } catch (const CoverageError& e) {
            out.rejected.push_back({raw.meter_id(), "coverage", e.what()});
        } catch (const DataError& e) {
            out.rejected.push_back({raw.meter_id(), "empty", e.what()});
        }
    }
    return out;
}

}  // namespace slp

