#include "slp/daytype_classifier.hpp"
#include "slp/errors.hpp"
#include "slp/synth.hpp"

#include "fixtures.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

using namespace slp;

namespace {

struct Toy {
    std::vector<std::vector<double>> x;
    std::vector<int> y;
};

Toy separable(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Toy t;
    for (int i = 0; i < n; ++i) {
        const int label = i % 2;
        t.x.push_back({label + 0.1 + 0.8 * u(rng), 2.0 * label + u(rng), -3.0 * label + u(rng)});
        t.y.push_back(label);
    }
    return t;
}

DecisionTree leaf_tree(int label, int n_classes) {
    DecisionTree t;
    DecisionTree::Node leaf;
    leaf.distribution.assign(static_cast<std::size_t>(n_classes), 0.0);
    leaf.distribution[static_cast<std::size_t>(label)] = 1.0;
    leaf.majority = label;
    t.nodes_.push_back(leaf);
    return t;
}

const slp::testing::SynthRun& realistic_run() {
    static const slp::testing::SynthRun run = slp::testing::synth_run(realistic_config(60, 2));
    return run;
}

}  // namespace

TEST_CASE("training on separable data", "[daytype-classifier]") {
    const Toy t = separable(60, 1);
    const RandomForest f = RandomForest::train(t.x, t.y, {20, 12, 0, true, 3});
    int correct = 0;
    for (std::size_t i = 0; i < t.x.size(); ++i) correct += f.predict(t.x[i]).label == t.y[i] ? 1 : 0;
    CHECK(correct == 60);
    CHECK(cross_val_accuracy(t.x, t.y, {20, 12, 0, true, 3}, 5) == 1.0);
    CHECK(f.n_features() == 3);
    CHECK(f.n_classes() == 2);
    for (const auto& tree : f.trees()) {
        CHECK(tree.depth() <= 12);
        for (const auto& node : tree.nodes())
            if (node.feature < 0) CHECK(std::accumulate(node.distribution.begin(), node.distribution.end(), 0.0) == Catch::Approx(1.0));
    }
}

TEST_CASE("null data gives chance accuracy", "[daytype-classifier]") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> z(0.0, 1.0);
    SECTION("independent features, balanced classes") {
        std::vector<std::vector<double>> x;
        std::vector<int> y;
        for (int i = 0; i < 400; ++i) {
            x.push_back({z(rng), z(rng), z(rng), z(rng)});
            y.push_back(i % 2);
        }
        const double acc = cross_val_accuracy(x, y, {30, 8, 0, true, 1}, 5);
        CHECK(std::abs(acc - 0.5) <= 0.1);
    }
    SECTION("shuffled labels of real structure") {
        const auto& run = realistic_run();
        LabelledDays days = training_days(run.agg, run.data.truth.model.calendar);
        std::shuffle(days.labels.begin(), days.labels.end(), std::mt19937_64(9));
        std::array<int, 3> counts{};
        for (int l : days.labels) ++counts[static_cast<std::size_t>(l)];
        const double prior = *std::max_element(counts.begin(), counts.end()) / static_cast<double>(days.labels.size());
        const double acc = cross_val_accuracy(days.features, days.labels, {40, 12, 0, true, 1}, 5);
        CHECK(std::abs(acc - prior) <= 0.1);
    }
}

TEST_CASE("vote shares", "[daytype-classifier]") {
    SECTION("a one-tree forest on a pure leaf") {
        const Toy t = separable(40, 2);
        const RandomForest f = RandomForest::train(t.x, t.y, {1, 12, 3, false, 1});
        const Prediction p = f.predict(t.x[0]);
        CHECK(p.label == t.y[0]);
        CHECK(p.probabilities[static_cast<std::size_t>(t.y[0])] == 1.0);
    }
    SECTION("6/4/0 over ten trees") {
        std::vector<DecisionTree> trees;
        for (int i = 0; i < 6; ++i) trees.push_back(leaf_tree(0, 3));
        for (int i = 0; i < 4; ++i) trees.push_back(leaf_tree(1, 3));
        const RandomForest f = RandomForest::from_trees(std::move(trees), 3, 1);
        const Prediction p = f.predict(std::vector<double>{0.0});
        CHECK(p.label == 0);
        CHECK(p.probabilities == std::vector<double>{0.6, 0.4, 0.0});
    }
    SECTION("ties go to the lower label") {
        std::vector<DecisionTree> trees{leaf_tree(2, 3), leaf_tree(1, 3)};
        CHECK(RandomForest::from_trees(std::move(trees), 3, 1).predict(std::vector<double>{0.0}).label == 1);
    }
}

TEST_CASE("probabilities and determinism", "[daytype-classifier]") {
    const auto& run = realistic_run();
    const LabelledDays days = training_days(run.agg, run.data.truth.model.calendar);
    const ForestParams params{25, 12, 0, true, 5};
    const RandomForest a = train_day_types(days, params);
    const RandomForest b = train_day_types(days, params);
    for (std::size_t i = 0; i < days.features.size(); i += 7) {
        const Prediction pa = a.predict(days.features[i]);
        const Prediction pb = b.predict(days.features[i]);
        CHECK(pa.label == pb.label);
        CHECK(pa.probabilities == pb.probabilities);
        double s = 0.0;
        for (double p : pa.probabilities) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            s += p;
        }
        CHECK(s == Catch::Approx(1.0).margin(1e-12));
    }
    CHECK(cross_val_accuracy(days.features, days.labels, params, 5) ==
          cross_val_accuracy(days.features, days.labels, params, 5));
}

TEST_CASE("duplicating a class never lowers its certain prediction", "[daytype-classifier]") {
    const Toy t = separable(30, 6);
    const ForestParams single{1, 12, 3, false, 1};
    const RandomForest f = RandomForest::train(t.x, t.y, single);
    Toy grown = t;
    for (std::size_t i = 0; i < t.x.size(); ++i) {
        if (t.y[i] != 1) continue;
        grown.x.push_back(t.x[i]);
        grown.y.push_back(1);
    }
    const RandomForest g = RandomForest::train(grown.x, grown.y, single);
    for (const auto& x : t.x) {
        const Prediction before = f.predict(x);
        if (before.label != 1 || before.probabilities[1] < 1.0) continue;
        CHECK(g.predict(x).probabilities[1] >= before.probabilities[1]);
    }
}

TEST_CASE("training errors", "[daytype-classifier]") {
    const std::vector<std::vector<double>> x{{0.0}, {1.0}, {2.0}};
    CHECK_THROWS_AS(RandomForest::train(x, std::vector<int>{0, 2, 2}), DataError);
    const std::vector<std::vector<double>> ragged{{0.0}, {1.0, 2.0}};
    CHECK_THROWS_AS(RandomForest::train(ragged, std::vector<int>{0, 1}), ConfigError);
    const Toy t = separable(6, 1);
    CHECK_THROWS_AS(cross_val_accuracy(t.x, t.y, {}, 5), DataError);
}

TEST_CASE("day features", "[daytype-classifier]") {
    std::vector<double> day(96, 0.1);
    day[30] = 0.5;
    const auto f = day_feature(day);
    REQUIRE(f.size() == kDayFeatureSize);
    CHECK(f[30] == 1.0);
    CHECK(f[0] == 0.0);
    CHECK(f[96] == Catch::Approx(0.1 * 95 * 0.25 + 0.5 * 0.25));
    CHECK(f[99] == 30.0);
    for (double v : f) CHECK(std::isfinite(v));
}

TEST_CASE("realistic day shapes", "[daytype-classifier]") {
    const auto& run = realistic_run();
    const CalendarConfig& cal = run.data.truth.model.calendar;
    const LabelledDays days = training_days(run.agg, cal);
    for (Date d : days.dates) REQUIRE_FALSE(is_special_day(d, cal));
    CHECK(cross_val_accuracy(days.features, days.labels, {}, 5) >= 0.9);

    const RandomForest forest = train_day_types(days);
    SECTION("a planted Sunday shape is predicted Sunday") {
        const SlpModel& m = run.data.truth.model;
        const Date sunday = make_date(2021, 7, 11);
        std::vector<double> kw;
        for (int q = 0; q < 96; ++q) kw.push_back(m.curve.at(sunday) * m.profiles.at(Season::Summer, DayType::Sunday)[static_cast<std::size_t>(q)]);
        CHECK(forest.predict(day_feature(kw)).label == static_cast<int>(DayType::Sunday));
    }
    SECTION("audit of special days") {
        const AuditReport audit = audit_special_days(forest, run.agg, cal);
        int holidays = 0;
        int sundays = 0;
        for (const auto& e : audit.entries) {
            if (e.category == "holiday") {
                ++holidays;
                sundays += e.predicted == DayType::Sunday ? 1 : 0;
            }
            if (e.category == "christmas_eve") CHECK(e.predicted == DayType::Saturday);
        }
        CHECK(holidays == static_cast<int>(german_federal_holidays(2021).size()));
        CHECK(sundays * 2 > holidays);
        CHECK(std::any_of(audit.summary.begin(), audit.summary.end(), [](const auto& s) { return s.category == "holiday" && s.majority == DayType::Sunday; }));
    }
    SECTION("no holidays, no holiday entries") {
        const AuditReport audit = audit_special_days(forest, run.agg, cal.with_holidays({}));
        CHECK(std::none_of(audit.entries.begin(), audit.entries.end(), [](const auto& e) { return e.category == "holiday"; }));
    }
}
