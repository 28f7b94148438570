#include "slp/enhancements.hpp"
#include "slp/errors.hpp"
#include "slp/evaluation.hpp"
#include "slp/synth.hpp"

#include "fixtures.hpp"
#include "savgol_oracle.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace slp;

namespace {

constexpr int kYear = 2021;

SlpModel two_level_model(double winter, double transition, double summer) {
    SlpModel m;
    for (DayType t : kDayTypes) {
        m.profiles.set(Season::Winter, t, DailyProfile(winter));
        m.profiles.set(Season::Transition, t, DailyProfile(transition));
        m.profiles.set(Season::Summer, t, DailyProfile(summer));
    }
    return m;
}

double max_day_jump(const YearSeries& y, const CalendarConfig& cal) {
    double worst = 0.0;
    for (int d = 7; d < static_cast<int>(y.kw.size()) / kSlotsPerDay; ++d) {
        const Date date = first_day(y.year) + std::chrono::days{d};
        const Date prev = date - std::chrono::days{7};
        if (classify_day(date, cal) != classify_day(prev, cal)) continue;
        for (int q = 0; q < kSlotsPerDay; ++q) worst = std::max(worst, std::abs(y.day_values(d)[static_cast<std::size_t>(q)] - y.day_values(d - 7)[static_cast<std::size_t>(q)]));
    }
    return worst;
}

}  // namespace

TEST_CASE("alpha_at ramps linearly across the centred window", "[enhancements]") {
    const Date t = make_date(kYear, 4, 1);
    CHECK(alpha_at(t - std::chrono::days{10}, t, 20.0) == 0.0);
    CHECK(alpha_at(t, t, 21.0) == 0.5);
    CHECK(alpha_at(t + std::chrono::days{10}, t, 20.0) == 1.0);
    CHECK(alpha_at(t - std::chrono::days{40}, t, 20.0) == 0.0);
    CHECK(alpha_at(t + std::chrono::days{40}, t, 20.0) == 1.0);
    CHECK(alpha_at(t + std::chrono::days{5}, t, 20.0) == Catch::Approx(0.75));
    double prev = 0.0;
    for (int k = -15; k <= 15; ++k) {
        const double a = alpha_at(t + std::chrono::days{k}, t, 21.0);
        CHECK(a >= prev);
        prev = a;
    }
    SECTION("zero duration is the hard switch") {
        CHECK(alpha_at(t - std::chrono::days{1}, t, 0.0) == 0.0);
        CHECK(alpha_at(t, t, 0.0) == 1.0);
    }
    CHECK_THROWS_AS(alpha_at(t, t, -1.0), ConfigError);
}

TEST_CASE("blend", "[enhancements]") {
    std::vector<double> a(96), b(96);
    for (std::size_t q = 0; q < 96; ++q) {
        a[q] = 0.05 + 0.001 * static_cast<double>(q);
        b[q] = a[q] + 0.02 + 0.0005 * static_cast<double>(q % 7);
    }
    const DailyProfile p1(a), p2(b);
    CHECK(blend(p1, p2, 0.0) == p1);
    CHECK(blend(p1, p2, 1.0) == p2);
    const DailyProfile mid = blend(DailyProfile(0.1), DailyProfile(0.3), 0.5);
    for (std::size_t q = 0; q < 96; ++q) CHECK(mid[q] == Catch::Approx(0.2).epsilon(1e-15));
    for (double alpha = 0.0; alpha <= 1.0; alpha += 0.1) {
        const DailyProfile y = blend(p1, p2, alpha);
        CHECK(y.energy_kwh() == Catch::Approx((1.0 - alpha) * p1.energy_kwh() + alpha * p2.energy_kwh()).margin(1e-12));
        const DailyProfile z = blend(p1, p2, std::min(1.0, alpha + 0.05));
        for (std::size_t q = 0; q < 96; ++q) CHECK(z[q] >= y[q]);
    }
}

TEST_CASE("assemble_blended", "[enhancements]") {
    const CalendarConfig cal;
    SlpModel m = two_level_model(0.2, 0.15, 0.1);
    m.calendar = cal;

    SECTION("zero duration equals the conventional assembly") {
        m.transition = TransitionConfig::from_calendar(cal, 0.0);
        CHECK(assemble_blended(m, kYear).kw == assemble_conventional(m, kYear).kw);
    }
    SECTION("blending shrinks the largest week-on-week jump") {
        SlpModel hard = m;
        hard.transition = TransitionConfig::from_calendar(cal, 0.0);
        SlpModel soft = m;
        soft.transition = TransitionConfig::from_calendar(cal, 21.0);
        CHECK(max_day_jump(assemble_blended(soft, kYear), cal) < max_day_jump(assemble_blended(hard, kYear), cal));
    }
    SECTION("inside a window the output lies between the two seasons") {
        m.transition = TransitionConfig::from_calendar(cal, 21.0);
        const YearSeries y = assemble_blended(m, kYear);
        const int center = day_of_year(make_date(kYear, 5, 15));
        for (int d = center - 10; d <= center + 10; ++d) {
            const double v = y.day_values(d)[50];
            CHECK(v >= 0.1 - 1e-15);
            CHECK(v <= 0.15 + 1e-15);
        }
        CHECK(y.day_values(center)[50] == Catch::Approx(0.125));
    }
    SECTION("identical profiles make the duration irrelevant") {
        SlpModel flat = two_level_model(0.1, 0.1, 0.1);
        flat.curve = DynamisationCurve({1.1, -0.3, 0.25});
        for (double d : {0.0, 7.0, 21.0, 40.0}) {
            flat.transition = TransitionConfig::from_calendar(cal, d);
            const auto a = assemble_blended(flat, kYear).kw;
            const auto b = assemble_conventional(flat, kYear).kw;
            for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == Catch::Approx(b[i]).epsilon(1e-14));
        }
    }
    SECTION("overlapping windows") {
        m.transition = TransitionConfig::from_calendar(cal, 120.0);
        CHECK_THROWS_AS(assemble_blended(m, kYear), ConfigError);
    }
    SECTION("transitions from the calendar") {
        const TransitionConfig t = TransitionConfig::from_calendar(cal, 9.0);
        CHECK(t.duration_days == 9.0);
        REQUIRE(t.transitions.size() == 4);
        CHECK(t.transitions[0].from == Season::Winter);
        CHECK(t.transitions[0].to == Season::Transition);
    }
}

TEST_CASE("search_duration recovers planted widths", "[enhancements]") {
    SECTION("planted 21-day blend") {
        SynthConfig c = realistic_config(80, 3);
        const auto run = slp::testing::synth_run(c);
        const SlpModel m = build_slp(run.agg, run.data.truth.model.calendar);
        const DurationSearch s = search_duration(run.agg, m);
        CHECK(std::abs(s.best_duration_days - 21.0) <= 4.0);
        CHECK(s.curve.size() >= 15);
        CHECK(std::is_sorted(s.curve.begin(), s.curve.end(), [](const auto& a, const auto& b) { return a.duration_days < b.duration_days; }));
        for (const auto& p : s.curve) CHECK(p.mae_kw >= s.best_mae_kw);
    }
    SECTION("planted hard switch") {
        SynthConfig c = realistic_config(80, 4);
        c.planted = realistic_model(kYear, std::nullopt);
        const auto run = slp::testing::synth_run(c);
        const SlpModel m = build_slp(run.agg, run.data.truth.model.calendar);
        CHECK(search_duration(run.agg, m).best_duration_days <= 3.0);
    }
    SECTION("every candidate is reported and ties go to the shorter duration") {
        SlpModel flat = two_level_model(0.1, 0.1, 0.1);
        const AggregateSeries agg = slp::testing::constant_aggregate(kYear, 0.1);
        const std::vector<double> cand{14.0, 7.0, 0.0};
        const DurationSearch s = search_duration(agg, flat, cand);
        REQUIRE(s.curve.size() == 3);
        CHECK(s.best_duration_days == 0.0);
        CHECK(s.best_mae_kw == Catch::Approx(0.0).margin(1e-15));
        CHECK_THROWS_AS(search_duration(agg, flat, std::vector<double>{}), ConfigError);
    }
}

TEST_CASE("savgol coefficients and errors", "[enhancements]") {
    for (auto [w, p] : {std::pair{5, 2}, {11, 3}, {21, 4}, {7, 0}}) {
        const auto c = savgol_coefficients({w, p});
        REQUIRE(c.size() == static_cast<std::size_t>(w));
        CHECK(std::accumulate(c.begin(), c.end(), 0.0) == Catch::Approx(1.0).margin(1e-12));
        for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i] == Catch::Approx(c[c.size() - 1 - i]).margin(1e-14));
    }
    const auto c5 = savgol_coefficients({5, 2});
    const std::vector<double> textbook{-3.0 / 35, 12.0 / 35, 17.0 / 35, 12.0 / 35, -3.0 / 35};
    for (std::size_t i = 0; i < 5; ++i) CHECK(c5[i] == Catch::Approx(textbook[i]).margin(1e-14));

    const std::vector<double> x(96, 0.1);
    CHECK_THROWS_AS(savgol_smooth(x, {10, 3}), ConfigError);
    CHECK_THROWS_AS(savgol_smooth(x, {5, 5}), ConfigError);
    CHECK_THROWS_AS(savgol_smooth(x, {97, 3}), ConfigError);
}

TEST_CASE("savgol smoothing", "[enhancements]") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> z(0.0, 1.0);
    SECTION("constant input") {
        const auto y = savgol_smooth(std::vector<double>(96, 0.37));
        for (double v : y) CHECK(v == Catch::Approx(0.37).margin(1e-12));
    }
    SECTION("cubic samples are reproduced away from the wrap") {
        std::vector<double> x(96);
        for (int q = 0; q < 96; ++q) x[static_cast<std::size_t>(q)] = 0.2 + 0.01 * q - 3e-4 * q * q + 2e-6 * q * q * q;
        const auto y = savgol_smooth(x, {11, 3});
        for (int q = 5; q < 91; ++q) CHECK(y[static_cast<std::size_t>(q)] == Catch::Approx(x[static_cast<std::size_t>(q)]).margin(1e-9));
    }
    SECTION("white noise loses variance and matches the oracle") {
        std::vector<double> x(96);
        for (auto& v : x) v = z(rng);
        const auto y = savgol_smooth(x, {11, 3});
        auto var = [](const std::vector<double>& v) {
            const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
            double s = 0.0;
            for (double a : v) s += (a - m) * (a - m);
            return s / static_cast<double>(v.size());
        };
        CHECK(var(y) < var(x));
        const auto o = slp::testing::window_lsq_oracle(x, 11, 3);
        for (std::size_t q = 0; q < 96; ++q) CHECK(y[q] == Catch::Approx(o[q]).margin(1e-9));
    }
    SECTION("other window sizes match the oracle") {
        for (auto [w, p] : {std::pair{5, 2}, {15, 4}, {31, 2}}) {
            std::vector<double> x(96);
            for (auto& v : x) v = 0.1 + 0.05 * z(rng);
            const auto y = savgol_smooth(x, {w, p});
            const auto o = slp::testing::window_lsq_oracle(x, w, p);
            for (std::size_t q = 0; q < 96; ++q) CHECK(y[q] == Catch::Approx(o[q]).margin(1e-9));
        }
    }
    SECTION("profile smoothing clamps at zero") {
        std::vector<double> x(96, 0.0);
        x[40] = 1.0;
        const DailyProfile p = savgol_smooth(DailyProfile(x), {11, 3});
        for (std::size_t q = 0; q < 96; ++q) CHECK(p[q] >= 0.0);
        const ProfileSet set = savgol_smooth(ProfileSet(DailyProfile(x)));
        CHECK(set.at(Season::Summer, DayType::Sunday) == p);
    }
}
