#include "slp/errors.hpp"
#include "slp/io.hpp"
#include "slp/slp_builder.hpp"
#include "slp/synth.hpp"
#include "slp/text.hpp"

#include "fixtures.hpp"

#include <catch_amalgamated.hpp>

#include <json.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

using namespace slp;

namespace {

constexpr int kYear = 2021;

}  // namespace

TEST_CASE("double formatting round-trips", "[io]") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 2000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<double>(i % 17) - 8.0);
        REQUIRE(text::parse_double(text::format_double(v)) == v);
    }
    CHECK(text::format_double(0.1) == "0.1");
    CHECK(text::format_double(2.0) == "2");
    CHECK(std::isnan(*text::parse_double("nan")));
    CHECK_FALSE(text::parse_double("1.5x").has_value());
    CHECK(text::format_fixed(0.126, 2) == "0.13");
    CHECK(text::fnv1a("") == 14695981039346656037ULL);
    CHECK(text::hex64(255) == "00000000000000ff");
    CHECK(text::trim("  a b \t") == "a b");
    CHECK(text::split("a,,b", ',').size() == 3);
}

TEST_CASE("SLP model JSON round-trip", "[io]") {
    SlpModel m = realistic_model(kYear, 14.0);
    m.calendar = m.calendar.with_rules(DayType::Sunday, DayType::Saturday);
    m.level_kw = 0.114;
    const std::string text = io::to_json(m);
    const SlpModel back = io::slp_model_from_json(text);
    CHECK(back == m);
    CHECK(io::to_json(back) == text);

    SlpModel additive = m;
    additive.composition = Composition::Additive;
    additive.transition.reset();
    CHECK(io::slp_model_from_json(io::to_json(additive)) == additive);

    const auto j = nlohmann::json::parse(text);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(std::is_sorted(keys.begin(), keys.end()));
}

TEST_CASE("Fourier model JSON round-trip", "[io]") {
    FourierConfig c;
    c.daily_harmonics = 5;
    c.form = FourierForm::TwoDayType;
    std::vector<double> coef(c.columns());
    for (std::size_t i = 0; i < coef.size(); ++i) coef[i] = std::sin(static_cast<double>(i) * 0.37) * 0.01;
    const FourierModel m = FourierModel::from_coefficients(c, FourierDomain::Log, coef);
    const FourierModel back = io::fourier_model_from_json(io::to_json(m));
    CHECK(back.coefficients() == coef);
    CHECK(back.domain == FourierDomain::Log);
    CHECK(back.config.form == FourierForm::TwoDayType);
    CHECK(io::to_json(back) == io::to_json(m));
}

TEST_CASE("calendar JSON round-trip", "[io]") {
    const CalendarConfig cal = realistic_model(kYear).calendar;
    CHECK(io::calendar_from_json(io::calendar_to_json(cal)) == cal);
}

TEST_CASE("malformed model JSON", "[io]") {
    CHECK_THROWS_AS(io::slp_model_from_json("{not json"), ParseError);
    CHECK_THROWS_AS(io::slp_model_from_json("{}"), ConfigError);
    CHECK_THROWS_AS(io::fourier_model_from_json(R"({"yearly_harmonics": 1})"), ConfigError);
}

TEST_CASE("ground truth JSON", "[io]") {
    SynthConfig c = realistic_config(3, 2);
    c.ev_rate = 1.0;
    const SynthDataset d = generate(c);
    const auto j = nlohmann::json::parse(io::to_json(d.truth));
    CHECK(j.at("households").size() == 3);
    CHECK(j.at("households")[0].at("ev") == true);
    CHECK(j.at("households")[0].at("injected").size() == d.truth.households[0].injected.size());
    CHECK(j.at("base_energy_kwh").get<double>() == Catch::Approx(1000.0).margin(1e-6));
    CHECK(io::slp_model_from_json(j.at("model").dump()) == d.truth.model);
}

TEST_CASE("CSV tables", "[io]") {
    const SlpModel m = realistic_model(kYear);
    SECTION("profiles") {
        std::ostringstream out;
        io::write_profiles_csv(out, m.profiles);
        std::istringstream in(out.str());
        std::string line;
        std::getline(in, line);
        CHECK(line.rfind("slot,time,winter_workday,", 0) == 0);
        CHECK(text::split(line, ',').size() == 11);
        int rows = 0;
        while (std::getline(in, line)) {
            const auto cells = text::split(line, ',');
            REQUIRE(cells.size() == 11);
            CHECK(text::parse_double(cells[2]) == m.profiles.at(Season::Winter, DayType::Workday)[static_cast<std::size_t>(rows)]);
            if (rows == 5) CHECK(cells[1] == "01:15");
            ++rows;
        }
        CHECK(rows == 96);
    }
    SECTION("year series") {
        const YearSeries y = assemble(m, kYear);
        std::ostringstream out;
        io::write_year_csv(out, y);
        std::istringstream in(out.str());
        std::string line;
        std::getline(in, line);
        CHECK(line == "timestamp,kw");
        std::getline(in, line);
        CHECK(line.rfind("2021-01-01", 0) == 0);
        std::size_t rows = 1;
        while (std::getline(in, line)) ++rows;
        CHECK(rows == y.kw.size());
    }
}

TEST_CASE("atomic file writes", "[io]") {
    const slp::testing::TempDir dir("io");
    const auto path = dir.path() / "nested" / "model.json";
    io::write_file_atomic(path, "first");
    CHECK(io::read_file(path) == "first");
    io::write_file_atomic(path, "second");
    CHECK(io::read_file(path) == "second");
    CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    CHECK_THROWS_AS(io::read_file(dir.path() / "absent"), DataError);
}
