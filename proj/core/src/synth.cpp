#include "slp/synth.hpp"

#include "slp/enhancements.hpp"
#include "slp/errors.hpp"
#include "slp/slp_builder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

namespace slp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffU); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

Date easter_sunday(int year) {
    const int a = year % 19;
    const int b = year / 100;
    const int c = year % 100;
    const int d = b / 4;
    const int e = b % 4;
    const int f = (b + 8) / 25;
    const int g = (b - f + 1) / 3;
    const int h = (19 * a + b - d - g + 15) % 30;
    const int i = c / 4;
    const int k = c % 4;
    const int l = (32 + 2 * e + 2 * i - h - k) % 7;
    const int m = (a + 11 * h + 22 * l) / 451;
    const int month = (h + l - 7 * m + 114) / 31;
    const int day = ((h + l - 7 * m + 114) % 31) + 1;
    return make_date(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
}

/// The nine planted shapes before energy equalization.
DailyProfile planted_shape(Season season, DayType type) {
    struct SeasonShape {
        double base, morning, midday, evening_at, evening_width, evening;
    };
    SeasonShape s{};
    switch (season) {
        case Season::Winter: s = {0.070, 0.060, 0.050, 18.5, 2.0, 0.140}; break;
        case Season::Summer: s = {0.060, 0.040, 0.040, 21.0, 2.0, 0.070}; break;
        case Season::Transition: s = {0.065, 0.050, 0.045, 19.75, 2.0, 0.100}; break;
    }
    double morning_at = 7.0;
    double morning_width = 1.75;
    double morning = s.morning;
    double midday_at = 12.5;
    double midday = s.midday;
    if (type == DayType::Saturday) {
        morning_at = 7.5;
        morning_width = 2.0;
        morning *= 1.05;
        midday *= 1.05;
    } else if (type == DayType::Sunday) {
        morning_at = 7.75;
        morning_width = 2.0;
        midday_at = 12.25;
        midday *= 1.15;
    }
    const std::array<Bump, 3> bumps{Bump{morning_at, morning_width, morning}, Bump{midday_at, 2.0, midday},
                                    Bump{s.evening_at, s.evening_width, s.evening}};
    return shape_profile(s.base, bumps);
}

FourierModel rescale(FourierModel model, double factor) {
    if (model.domain == FourierDomain::Log) {
        model.intercept += std::log(factor);
        return model;
    }
    auto coef = model.coefficients();
    for (double& c : coef) c *= factor;
    return FourierModel::from_coefficients(model.config, model.domain, coef);
}

struct Planted {
    SlpModel model;
    std::optional<FourierModel> fourier;
    YearSeries base;
};

Planted plant(const SynthConfig& config) {
    config.validate();
    Planted p;
    YearSeries raw;
    if (config.planted_fourier) {
        raw = predict_year(*config.planted_fourier, config.year);
    } else {
        raw = assemble(config.planted, config.year);
    }
    const double energy = raw.energy_kwh();
    if (!(energy > 0.0)) throw ConfigError("planted model has no energy in the synthetic year");
    const double factor = kTargetAnnualKwh / energy;
    p.model = config.planted;
    if (!config.planted_fourier) {
        p.model.profiles = config.planted.profiles.scaled(factor);
        p.model.level_kw = config.planted.level_kw * factor;
    }
    if (config.planted_fourier) p.fourier = rescale(*config.planted_fourier, factor);

    p.base = raw;
    for (double& v : p.base.kw) v *= factor;
    const Timestamp start = Timestamp::from(first_day(config.year));
    for (std::size_t i = 0; i < p.base.kw.size(); ++i) {
        const Timestamp t = start + static_cast<std::int64_t>(i);
        const Date date = t.date();
        const int slot = t.slot_of_day();
        if (config.weekly_uplift && iso_weekday(date) == config.weekly_uplift->iso_weekday &&
            slot >= config.weekly_uplift->from_slot && slot < config.weekly_uplift->to_slot) {
            p.base.kw[i] *= 1.0 + config.weekly_uplift->factor;
        }
        for (const auto& u : config.date_uplifts) {
            if (date >= u.first && date <= u.last && slot >= u.from_slot && slot < u.to_slot) p.base.kw[i] *= 1.0 + u.factor;
        }
    }
    return p;
}

/// Circularly shifts every day of `base` by `shift` slots (positive = later).
std::vector<double> shifted(const std::vector<double>& base, double shift) {
    if (shift == 0.0) return base;
    std::vector<double> out(base.size());
    const double whole = std::floor(shift);
    const double frac = shift - whole;
    const int w = static_cast<int>(whole);
    for (std::size_t day = 0; day < base.size() / kSlotsPerDay; ++day) {
        const double* src = base.data() + day * kSlotsPerDay;
        double* dst = out.data() + day * kSlotsPerDay;
        for (int q = 0; q < kSlotsPerDay; ++q) {
            const int a = ((q - w) % kSlotsPerDay + kSlotsPerDay) % kSlotsPerDay;
            const int b = (a - 1 + kSlotsPerDay) % kSlotsPerDay;
            dst[q] = (1.0 - frac) * src[a] + frac * src[b];
        }
    }
    return out;
}

/// 1 + a * sum_k (g(q - c_k) - mean g); the mean of a circular Gaussian over a
/// uniformly placed centre is width * sqrt(2 pi) / 96, so the expectation is 1.
std::array<double, kSlotsPerDay> habit_modulation(std::span<const double> centres, double amplitude, double width) {
    std::array<double, kSlotsPerDay> out;
    out.fill(1.0);
    const double mean = width * std::sqrt(2.0 * std::numbers::pi) / kSlotsPerDay;
    for (double c : centres) {
        for (int q = 0; q < kSlotsPerDay; ++q) {
            double dist = std::abs(q - c);
            dist = std::min(dist, kSlotsPerDay - dist);
            out[static_cast<std::size_t>(q)] += amplitude * (std::exp(-0.5 * (dist / width) * (dist / width)) - mean);
        }
    }
    return out;
}

}  // namespace

DailyProfile shape_profile(double base_kw, std::span<const Bump> bumps) {
    std::array<double, kSlotsPerDay> v{};
    for (int q = 0; q < kSlotsPerDay; ++q) {
        const double hour = (q + 0.5) * kHoursPerSlot;
        double x = base_kw;
        for (const Bump& b : bumps) {
            double dist = std::abs(hour - b.center_hour);
            dist = std::min(dist, 24.0 - dist);
            x += b.height_kw * std::exp(-0.5 * (dist / b.width_hours) * (dist / b.width_hours));
        }
        v[static_cast<std::size_t>(q)] = x;
    }
    return DailyProfile(v);
}

void SynthConfig::validate() const {
    if (n_households < 1) throw ConfigError("synth needs at least one household");
    if (!(noise >= 0.0) || !(level_spread >= 0.0) || !(shift_std_slots >= 0.0)) {
        throw ConfigError("synth noise, level spread and shift must be non-negative");
    }
    if (habit_events < 0 || !(habit_amplitude >= 0.0) || !(habit_width_slots > 0.0) ||
        habit_events * habit_amplitude * habit_width_slots * std::sqrt(2.0 * std::numbers::pi) >= kSlotsPerDay) {
        throw ConfigError("synth habit settings must keep the modulation positive");
    }
    for (double r : {ev_rate, pv_rate, defect_rate, gap_rate}) {
        if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("synth injection rates must lie in [0, 1]");
    }
    if (!(gap_fraction > 0.0 && gap_fraction < 1.0)) throw ConfigError("synth gap fraction must lie in (0, 1)");
    if (!planted_fourier) {
        for (Season s : kSeasons) {
            for (DayType t : kDayTypes) {
                const auto& v = planted.profiles.at(s, t).values();
                if (*std::min_element(v.begin(), v.end()) <= 0.0) {
                    throw ConfigError("planted profile " + std::string(to_string(s)) + "/" + std::string(to_string(t)) +
                                      " must be positive");
                }
            }
        }
    }
}

std::vector<SeasonBoundary> realistic_boundaries() {
    using std::chrono::month_day;
    using namespace std::chrono;
    return {{month_day{March / 5}, Season::Transition},
            {month_day{May / 30}, Season::Summer},
            {month_day{September / 1}, Season::Transition},
            {month_day{October / 20}, Season::Winter}};
}

std::set<Date> german_federal_holidays(int year) {
    const Date easter = easter_sunday(year);
    using std::chrono::days;
    std::set<Date> out{make_date(year, 1, 1),  easter - days{2},        easter + days{1},
                       make_date(year, 5, 1),  easter + days{39},       easter + days{50},
                       make_date(year, 10, 3), make_date(year, 12, 25), make_date(year, 12, 26)};
    if (year == 2017) out.insert(make_date(2017, 10, 31));
    return out;
}

SlpModel realistic_model(int year, std::optional<double> transition_days) {
    SlpModel m;
    m.calendar = CalendarConfig(german_federal_holidays(year), realistic_boundaries(), DayType::Saturday, DayType::Sunday);
    constexpr double amplitude = 0.2;
    // 1 + A (1 - 8x(1-x)): peaks at the turn of the year, trough mid-year.
    m.curve = DynamisationCurve({1.0 + amplitude, -8.0 * amplitude, 8.0 * amplitude}).normalized();
    const double daily_kwh = kTargetAnnualKwh / 365.0;
    for (Season s : kSeasons) {
        for (DayType t : kDayTypes) {
            const DailyProfile shape = planted_shape(s, t);
            std::array<double, kSlotsPerDay> v{};
            std::copy(shape.values().begin(), shape.values().end(), v.begin());
            const double k = daily_kwh / shape.energy_kwh();
            for (double& x : v) x *= k;
            m.profiles.set(s, t, DailyProfile(v));
        }
    }
    if (transition_days) m.transition = TransitionConfig::from_calendar(m.calendar, *transition_days);
    return m;
}

SynthConfig realistic_config(int n_households, std::uint64_t seed) {
    SynthConfig c;
    c.n_households = n_households;
    c.seed = seed;
    c.year = 2021;
    c.planted = realistic_model(c.year, 21.0);
    c.noise = 0.3;
    c.level_spread = 0.3;
    c.habit_events = 6;
    c.habit_amplitude = 0.5;
    c.habit_width_slots = 2.0;
    return c;
}

SynthDataset generate(const SynthConfig& config) {
    const Planted planted = plant(config);
    SynthDataset out;
    out.truth.year = config.year;
    out.truth.seed = config.seed;
    out.truth.model = planted.model;
    out.truth.fourier = planted.fourier;
    out.truth.base = planted.base;

    const Timestamp start = Timestamp::from(first_day(config.year));
    const std::size_t n = planted.base.kw.size();
    const double sigma = std::sqrt(std::log1p(config.noise * config.noise));

    for (int h = 0; h < config.n_households; ++h) {
        std::seed_seq seq{lo32(config.seed), hi32(config.seed), static_cast<std::uint32_t>(h), 0x5e7dU};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        HouseholdTruth truth;
        char id[32];
        std::snprintf(id, sizeof id, "H%05d", h + 1);
        truth.meter_id = id;
        truth.level_factor = config.level_spread > 0.0 ? std::exp(config.level_spread * normal(rng)) : 1.0;
        truth.shift_slots = config.shift_std_slots > 0.0 ? config.shift_std_slots * normal(rng) : 0.0;
        for (int k = 0; k < config.habit_events; ++k) truth.habit_slots.push_back(unit(rng) * kSlotsPerDay);
        truth.ev = unit(rng) < config.ev_rate;
        truth.pv = unit(rng) < config.pv_rate;
        truth.defect = unit(rng) < config.defect_rate;
        truth.gap = unit(rng) < config.gap_rate;

        std::vector<double> values = shifted(planted.base.kw, truth.shift_slots);
        const auto habit = habit_modulation(truth.habit_slots, config.habit_amplitude, config.habit_width_slots);
        for (std::size_t i = 0; i < n; ++i) {
            double& v = values[i];
            v *= truth.level_factor * habit[i % kSlotsPerDay];
            if (sigma > 0.0) v *= std::exp(sigma * normal(rng) - 0.5 * sigma * sigma);
        }
        std::vector<Quality> flags(n, Quality::Valid);

        if (truth.ev) {
            const double kw = 11.0;
            for (std::size_t day = 0; day < n / kSlotsPerDay; ++day) {
                if (unit(rng) >= 0.25) continue;
                const std::size_t begin = day * kSlotsPerDay + 88 + static_cast<std::size_t>(unit(rng) * 8.0);
                const std::size_t len = 12 + static_cast<std::size_t>(unit(rng) * 12.0);
                const std::size_t end = std::min(n, begin + len);
                for (std::size_t i = begin; i < end; ++i) values[i] += kw;
                truth.injected.push_back({"ev", begin, end - begin});
            }
        }
        if (truth.pv) {
            const double kwp = 3.0 + 5.0 * unit(rng);
            for (std::size_t day = 0; day < n / kSlotsPerDay; ++day) {
                const double x = year_fraction(first_day(config.year) + std::chrono::days{static_cast<int>(day)});
                const double season = 0.55 - 0.45 * std::cos(2.0 * std::numbers::pi * x);
                const double weather = 0.2 + 0.8 * unit(rng);
                std::size_t first = 0;
                std::size_t last = 0;
                for (int q = 0; q < kSlotsPerDay; ++q) {
                    const double hour = (q + 0.5) * kHoursPerSlot;
                    const double z = (hour - 13.0) / 2.5;
                    const double gen = kwp * season * weather * std::exp(-0.5 * z * z);
                    if (gen < 1e-3) continue;
                    const std::size_t i = day * kSlotsPerDay + static_cast<std::size_t>(q);
                    values[i] -= gen;
                    if (last == 0) first = i;
                    last = i + 1;
                }
                if (last > 0) truth.injected.push_back({"pv", first, last - first});
            }
        }
        if (truth.defect) {
            const std::size_t len = 150 + static_cast<std::size_t>(unit(rng) * 150.0);
            const std::size_t begin = static_cast<std::size_t>(unit(rng) * static_cast<double>(n - len));
            double stuck = values[begin];
            if (!(stuck > 0.0)) stuck = 0.1;
            for (std::size_t i = begin; i < begin + len; ++i) values[i] = stuck;
            truth.injected.push_back({"defect", begin, len});
        }
        if (truth.gap) {
            const auto len = static_cast<std::size_t>(config.gap_fraction * static_cast<double>(n));
            const std::size_t begin = static_cast<std::size_t>(unit(rng) * static_cast<double>(n - len));
            for (std::size_t i = begin; i < begin + len; ++i) {
                values[i] = kNaN;
                flags[i] = Quality::Missing;
            }
            truth.injected.push_back({"gap", begin, len});
        }
        out.households.emplace_back(truth.meter_id, start, std::move(values), std::move(flags));
        out.truth.households.push_back(std::move(truth));
    }
    return out;
}

GroundTruthModels ground_truth(const SynthConfig& config) {
    const Planted planted = plant(config);
    GroundTruthModels out;
    out.slp = planted.model;
    if (planted.fourier) {
        out.fourier = *planted.fourier;
        return out;
    }
    AggregateSeries agg;
    agg.year = config.year;
    agg.mean_kw = planted.base.kw;
    agg.contributors.assign(agg.mean_kw.size(), 1);
    agg.n_series = 1;
    FourierConfig fc;
    fc.calendar = planted.model.calendar;
    out.fourier = fit(agg, fc).model;
    return out;
}

}  // namespace slp
