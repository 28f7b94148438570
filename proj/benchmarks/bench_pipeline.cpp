#include "slp/daytype_classifier.hpp"
#include "slp/enhancements.hpp"
#include "slp/evaluation.hpp"
#include "slp/fourier_model.hpp"
#include "slp/season_discovery.hpp"
#include "slp/slp_builder.hpp"
#include "slp/synth.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace slp;

namespace {

struct Fixture {
    SynthDataset data;
    IngestResult pool;
    AggregateSeries agg;
};

// 100 realistic households, generated once.
const Fixture& fixture() {
    static const Fixture f = [] {
        Fixture x;
        x.data = generate(realistic_config(100, 1));
        IngestOptions o;
        o.year = x.data.truth.year;
        x.pool = ingest(x.data.households, o);
        x.agg = aggregate(x.pool.accepted);
        return x;
    }();
    return f;
}

void BM_Generate(benchmark::State& state) {
    const SynthConfig c = realistic_config(static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(generate(c));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Generate)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Ingest(benchmark::State& state) {
    const auto& f = fixture();
    IngestOptions o;
    o.year = f.data.truth.year;
    for (auto _ : state) benchmark::DoNotOptimize(ingest(f.data.households, o));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.data.households.size()));
}
BENCHMARK(BM_Ingest)->Unit(benchmark::kMillisecond);

void BM_Aggregate(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(aggregate(f.pool.accepted));
}
BENCHMARK(BM_Aggregate)->Unit(benchmark::kMillisecond);

void BM_BuildSlp(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(build_slp(f.agg, f.data.truth.model.calendar));
}
BENCHMARK(BM_BuildSlp)->Unit(benchmark::kMillisecond);

void BM_ChooseK(benchmark::State& state) {
    const DayShapeMatrix m = build_day_matrix(fixture().agg);
    const std::vector<std::uint64_t> seeds{1, 2, 3};
    for (auto _ : state) benchmark::DoNotOptimize(choose_k(m, 2, 6, seeds));
}
BENCHMARK(BM_ChooseK)->Unit(benchmark::kMillisecond);

void BM_DurationSearch(benchmark::State& state) {
    const auto& f = fixture();
    const SlpModel m = build_slp(f.agg, f.data.truth.model.calendar);
    for (auto _ : state) benchmark::DoNotOptimize(search_duration(f.agg, m));
}
BENCHMARK(BM_DurationSearch)->Unit(benchmark::kMillisecond);

void BM_Savgol(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(kSlotsPerDay);
    for (auto& v : x) v = u(rng);
    const SavgolParams p{static_cast<int>(state.range(0)), 3};
    for (auto _ : state) benchmark::DoNotOptimize(savgol_smooth(x, p));
}
BENCHMARK(BM_Savgol)->Arg(11)->Arg(31);

void BM_FourierFit(benchmark::State& state) {
    const auto& f = fixture();
    FourierConfig c;
    c.calendar = f.data.truth.model.calendar;
    c.daily_harmonics = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fit(f.agg, c));
}
BENCHMARK(BM_FourierFit)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_ForestTrain(benchmark::State& state) {
    const auto& f = fixture();
    const LabelledDays days = training_days(f.agg, f.data.truth.model.calendar);
    for (auto _ : state) benchmark::DoNotOptimize(train_day_types(days));
}
BENCHMARK(BM_ForestTrain)->Unit(benchmark::kMillisecond);

void BM_ShareExperiment(benchmark::State& state) {
    const auto& f = fixture();
    ShareOptions o;
    o.shares = {0.25, 0.5, 1.0};
    o.repeats = 2;
    o.calendar = f.data.truth.model.calendar;
    for (auto _ : state) benchmark::DoNotOptimize(share_experiment(f.pool.accepted, o));
}
BENCHMARK(BM_ShareExperiment)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
