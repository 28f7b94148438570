#include "slp/calendar.hpp"
#include "slp/errors.hpp"

#include <catch_amalgamated.hpp>

#include <limits>
#include <map>
#include <sstream>

using namespace slp;

namespace {

Date d(int y, unsigned m, unsigned day) { return make_date(y, m, day); }

}  // namespace

TEST_CASE("dates and weekdays", "[calendar]") {
    CHECK(iso_weekday(d(2021, 1, 4)) == 1);
    CHECK(iso_weekday(d(2021, 1, 3)) == 7);
    CHECK(days_in_year(2020) == 366);
    CHECK(days_in_year(2021) == 365);
    CHECK(slots_in_year(2020) == 35136);
    CHECK(slots_in_year(2021) == 35040);
    CHECK(day_of_year(d(2021, 1, 1)) == 0);
    CHECK(day_of_year(d(2021, 12, 31)) == 364);
    CHECK(parse_date("2021-03-05") == d(2021, 3, 5));
    CHECK(format_date(d(2021, 3, 5)) == "2021-03-05");
    CHECK_THROWS_AS(parse_date("2021-13-05"), ConfigError);
    CHECK_THROWS_AS(parse_date("2021-3-5x"), ConfigError);
}

TEST_CASE("leap day shares the index of Feb 28", "[calendar]") {
    CHECK(normalized_day_index(d(2020, 2, 29)) == normalized_day_index(d(2020, 2, 28)));
    CHECK(normalized_day_index(d(2020, 3, 1)) == normalized_day_index(d(2021, 3, 1)));
    CHECK(normalized_day_index(d(2020, 12, 31)) == 364);
    CHECK(year_fraction(d(2021, 1, 1)) == 0.0);
    CHECK(year_fraction(d(2021, 12, 31)) < 1.0);
}

TEST_CASE("ISO weeks across the year boundary", "[calendar]") {
    CHECK(iso_week(d(2021, 1, 3)) == IsoWeek{2020, 53});
    CHECK(iso_week(d(2021, 1, 4)) == IsoWeek{2021, 1});
    CHECK(iso_week(d(2019, 12, 30)) == IsoWeek{2020, 1});
}

TEST_CASE("timestamps on the quarter-hour grid", "[calendar]") {
    const Timestamp t = Timestamp::parse("2021-06-01T13:45");
    CHECK(t.date() == d(2021, 6, 1));
    CHECK(t.slot_of_day() == 55);
    CHECK(t.to_string() == "2021-06-01T13:45");
    CHECK(Timestamp::parse("2021-06-01 13:45:00") == t);
    CHECK((t + 3).to_string() == "2021-06-01T14:30");
    CHECK(Timestamp::from(d(2021, 6, 2)) - t == 41);
    CHECK_THROWS_AS(Timestamp::parse("2021-06-01T13:40"), ConfigError);
    CHECK_THROWS_AS(Timestamp::parse("2021-06-01T13:45:10"), ConfigError);
    CHECK_THROWS_AS(Timestamp::parse("yesterday"), ConfigError);
}

TEST_CASE("classify_day base rule and overrides", "[calendar]") {
    const Date wednesday_holiday = d(2021, 11, 17);
    REQUIRE(iso_weekday(wednesday_holiday) == 3);
    const CalendarConfig plain;
    const CalendarConfig with_holiday = plain.with_holidays({wednesday_holiday});

    SECTION("ordinary Tuesday is a workday") { CHECK(classify_day(d(2021, 11, 16), plain) == DayType::Workday); }
    SECTION("holiday on a Wednesday counts as Sunday") {
        CHECK(classify_day(wednesday_holiday, plain) == DayType::Workday);
        CHECK(classify_day(wednesday_holiday, with_holiday) == DayType::Sunday);
    }
    SECTION("Dec 24 on a Thursday is a Saturday") {
        REQUIRE(iso_weekday(d(2020, 12, 24)) == 4);
        CHECK(classify_day(d(2020, 12, 24), plain) == DayType::Saturday);
    }
    SECTION("Dec 31 follows the configured rule") {
        REQUIRE(iso_weekday(d(2020, 12, 31)) == 4);
        CHECK(classify_day(d(2020, 12, 31), plain) == DayType::Sunday);
        CHECK(classify_day(d(2020, 12, 31), CalendarConfig::conventional()) == DayType::Saturday);
    }
    SECTION("weekends") {
        CHECK(classify_day(d(2021, 11, 13), plain) == DayType::Saturday);
        CHECK(classify_day(d(2021, 11, 14), plain) == DayType::Sunday);
    }
}

TEST_CASE("holidays never turn a Sunday into another day type", "[calendar]") {
    std::set<Date> all;
    for (Date x = d(2021, 1, 1); x <= d(2021, 12, 31); x += std::chrono::days{1}) all.insert(x);
    const CalendarConfig none = CalendarConfig().with_rules(DayType::Saturday, DayType::Saturday);
    const CalendarConfig every = none.with_holidays(all);
    for (Date x : all) {
        const DayType before = classify_day(x, none);
        const DayType after = classify_day(x, every);
        CHECK(after == DayType::Sunday);
        if (before == DayType::Sunday) CHECK(after == DayType::Sunday);
    }
}

TEST_CASE("season_of with default boundaries", "[calendar]") {
    const CalendarConfig c;
    CHECK(season_of(d(2021, 1, 15), c) == Season::Winter);
    CHECK(season_of(d(2021, 7, 15), c) == Season::Summer);
    CHECK(season_of(d(2021, 4, 15), c) == Season::Transition);
    CHECK(season_of(d(2021, 10, 15), c) == Season::Transition);
    CHECK(season_of(d(2021, 12, 31), c) == Season::Winter);
    SECTION("a boundary date belongs to the segment it starts") {
        CHECK(season_of(d(2021, 3, 20), c) == Season::Winter);
        CHECK(season_of(d(2021, 3, 21), c) == Season::Transition);
        CHECK(season_of(d(2021, 5, 15), c) == Season::Summer);
        CHECK(season_of(d(2021, 11, 1), c) == Season::Winter);
    }
}

TEST_CASE("the nine (season, day type) buckets partition the year", "[calendar]") {
    const CalendarConfig c = CalendarConfig().with_holidays({d(2021, 4, 5), d(2021, 10, 3)});
    for (int year : {2020, 2021}) {
        std::map<std::pair<Season, DayType>, int> counts;
        for (Date x = first_day(year); x < first_day(year + 1); x += std::chrono::days{1}) {
            ++counts[{season_of(x, c), classify_day(x, c)}];
        }
        int total = 0;
        for (const auto& [key, n] : counts) total += n;
        CHECK(total == days_in_year(year));
        CHECK(counts.size() == 9);
    }
}

TEST_CASE("boundaries must be valid", "[calendar]") {
    CHECK_THROWS_AS(CalendarConfig({}, {}), ConfigError);
    const std::vector<SeasonBoundary> single{{std::chrono::January / 1, Season::Summer}};
    const CalendarConfig c({}, single);
    CHECK(season_of(d(2021, 8, 1), c) == Season::Summer);
    CHECK(season_of(d(2021, 1, 1), c) == Season::Summer);
}

TEST_CASE("holiday file parsing", "[calendar]") {
    std::istringstream in("# comment\n2021-01-01  # New Year\n\n2021-12-25\n");
    const auto h = parse_holidays(in);
    CHECK(h == std::set<Date>{d(2021, 1, 1), d(2021, 12, 25)});
    std::istringstream bad("2021-01-01\nnot a date\n");
    CHECK_THROWS_AS(parse_holidays(bad), ParseError);
    const auto shipped = load_holidays(SLP_DATA_DIR "/holidays_de_federal.txt");
    CHECK(shipped.contains(d(2021, 10, 3)));
    CHECK(shipped.contains(d(2017, 10, 31)));
}

TEST_CASE("daily profile validation", "[calendar]") {
    std::vector<double> v(96, 0.1);
    CHECK(DailyProfile(v).energy_kwh() == Catch::Approx(2.4));
    v[3] = -0.1;
    CHECK_THROWS_AS(DailyProfile(v), NumericError);
    CHECK_THROWS_AS(DailyProfile(std::vector<double>(95, 0.1)), ConfigError);
    v[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(DailyProfile(v), NumericError);
}
