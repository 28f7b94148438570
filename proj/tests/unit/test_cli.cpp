#include "cli.hpp"
#include "slp/io.hpp"

#include "fixtures.hpp"

#include <catch_amalgamated.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = slp::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

json read_json(const fs::path& p) { return json::parse(slp::io::read_file(p)); }

std::vector<std::string> with_out(const fs::path& dir, std::vector<std::string> args) {
    args.insert(args.begin() + 1, {"--out", dir.string()});
    return args;
}

}  // namespace

TEST_CASE("noise-free synth, build and evaluate round-trip to zero error", "[cli]") {
    const slp::testing::TempDir dir("cli_exact");
    const auto out = dir.path().string();
    REQUIRE(run({"synth", "--out", out, "--set", "synth.households=4", "--set", "synth.noise=0", "--set", "synth.level_spread=0",
                 "--set", "synth.habits=0", "--set", "synth.transition_days=0"})
                .code == 0);
    CHECK(fs::exists(dir.path() / "meters" / "H00004.csv"));
    const json truth = read_json(dir.path() / "ground_truth.json");
    slp::io::write_file_atomic(dir.path() / "calendar.json", truth.at("model").at("calendar").dump());
    slp::io::write_file_atomic(dir.path() / "run.json", json{{"calendar", "calendar.json"}, {"out", "."}}.dump());
    const std::string config = (dir.path() / "run.json").string();

    const Outcome built = run({"build-slp", "--config", config});
    INFO(built.err);
    REQUIRE(built.code == 0);
    CHECK(read_json(dir.path() / "slp_model.json").at("mae_kw").get<double>() < 1e-9);

    const Outcome eval = run({"evaluate", "--config", config, "--set", "evaluate.table=false"});
    INFO(eval.err);
    REQUIRE(eval.code == 0);
    const json report = read_json(dir.path() / "evaluation.json");
    REQUIRE(report.at("models").size() == 1);
    CHECK(report.at("models")[0].at("model") == "slp_model");
    CHECK(report.at("models")[0].at("mae_kw").get<double>() == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("validate rejects a meter with 90 % coverage", "[cli]") {
    const slp::testing::TempDir dir("cli_validate");
    REQUIRE(run(with_out(dir.path(), {"synth", "--set", "synth.households=12", "--set", "synth.gap_rate=0.5"})).code == 0);
    const json truth = read_json(dir.path() / "ground_truth.json");
    REQUIRE(run(with_out(dir.path(), {"validate"})).code == 0);
    const json report = read_json(dir.path() / "validate_report.json");
    int gaps = 0;
    for (const auto& h : truth.at("households")) {
        if (!h.at("gap").get<bool>()) continue;
        ++gaps;
        bool found = false;
        for (const auto& r : report.at("rejected"))
            if (r.at("meter_id") == h.at("meter_id")) found = r.at("reason") == "coverage";
        CHECK(found);
    }
    CHECK(gaps > 0);
    CHECK(report.at("rejected_count").get<int>() == gaps);
}

TEST_CASE("enhance finds the planted transition duration", "[cli]") {
    const slp::testing::TempDir dir("cli_enhance");
    REQUIRE(run(with_out(dir.path(), {"synth", "--set", "synth.households=300"})).code == 0);
    const Outcome r = run(with_out(dir.path(), {"enhance", "--set", "seasons.runs=3"}));
    INFO(r.err);
    REQUIRE(r.code == 0);
    const json report = read_json(dir.path() / "enhance_report.json");
    CHECK(std::abs(report.at("best_duration_days").get<double>() - 21.0) <= 4.0);
    CHECK(fs::exists(dir.path() / "enhanced_model.json"));
    CHECK(fs::exists(dir.path() / "duration_curve.csv"));
}

TEST_CASE("exit codes", "[cli]") {
    const slp::testing::TempDir dir("cli_codes");
    CHECK(run({}).code == slp::cli::kExitConfig);
    CHECK(run({"frobnicate"}).code == slp::cli::kExitConfig);
    CHECK(run({"--help"}).code == 0);

    const Outcome missing = run(with_out(dir.path(), {"build-slp"}));
    CHECK(missing.code == slp::cli::kExitConfig);
    CHECK(missing.err.find("build-slp") != std::string::npos);

    CHECK(run(with_out(dir.path(), {"synth", "--set", "no.such.key=1"})).code == slp::cli::kExitConfig);
    CHECK(run(with_out(dir.path(), {"synth", "--set", "synth.households=many"})).code == slp::cli::kExitConfig);
    CHECK(run(with_out(dir.path(), {"synth", "--set", "synth.noise=-1"})).code == slp::cli::kExitConfig);

    REQUIRE(run(with_out(dir.path(), {"synth", "--set", "synth.households=2"})).code == 0);
    {
        std::ofstream broken(dir.path() / "meters" / "H00001.csv", std::ios::app);
        broken << "2021-13-45T00:00,abc\n";
    }
    const Outcome bad = run(with_out(dir.path(), {"validate"}));
    CHECK(bad.code == slp::cli::kExitData);
    CHECK(bad.err.find("H00001") != std::string::npos);
}

TEST_CASE("reruns are byte-identical apart from the log", "[cli]") {
    const slp::testing::TempDir a("cli_rerun_a");
    const slp::testing::TempDir b("cli_rerun_b");
    for (const auto* d : {&a, &b}) {
        REQUIRE(run(with_out(d->path(), {"synth", "--seed", "5", "--set", "synth.households=20"})).code == 0);
        REQUIRE(run(with_out(d->path(), {"build-slp", "--seed", "5"})).code == 0);
        REQUIRE(run(with_out(d->path(), {"fourier", "--seed", "5"})).code == 0);
    }
    std::size_t compared = 0;
    for (const auto& e : fs::recursive_directory_iterator(a.path())) {
        if (!e.is_regular_file() || e.path().filename() == "run.log") continue;
        const auto rel = fs::relative(e.path(), a.path());
        REQUIRE(fs::exists(b.path() / rel));
        CHECK(slp::io::read_file(e.path()) == slp::io::read_file(b.path() / rel));
        ++compared;
    }
    CHECK(compared > 20);
    CHECK(fs::exists(a.path() / "run.log"));

    const std::string model = slp::io::read_file(a.path() / "slp_model.json");
    CHECK(model.find("\"config_hash\"") != std::string::npos);
    CHECK(slp::io::read_file(a.path() / "slp_profiles.csv").rfind("# config_hash=", 0) == 0);
}

TEST_CASE("export writes tables for the newest model", "[cli]") {
    const slp::testing::TempDir dir("cli_export");
    REQUIRE(run(with_out(dir.path(), {"synth", "--set", "synth.households=10"})).code == 0);
    REQUIRE(run(with_out(dir.path(), {"build-slp"})).code == 0);
    const Outcome r = run(with_out(dir.path(), {"export"}));
    INFO(r.err);
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir.path() / "slp_model_profiles.csv"));
    CHECK(fs::exists(dir.path() / "slp_model_year.csv"));
}
