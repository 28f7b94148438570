#pragma once

#include "slp/ingestion.hpp"
#include "slp/model.hpp"
#include "slp/slp_builder.hpp"
#include "slp/synth.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace slp::testing {

inline AggregateSeries aggregate_of(const std::vector<double>& kw, int year) {
    AggregateSeries a;
    a.year = year;
    a.mean_kw = kw;
    a.contributors.assign(kw.size(), 1);
    a.n_series = 1;
    return a;
}

inline AggregateSeries aggregate_of(const YearSeries& y) { return aggregate_of(y.kw, y.year); }

inline AggregateSeries constant_aggregate(int year, double kw) {
    return aggregate_of(std::vector<double>(static_cast<std::size_t>(slots_in_year(year)), kw), year);
}

struct SynthRun {
    SynthDataset data;
    IngestResult pool;
    AggregateSeries agg;
};

inline SynthRun synth_run(const SynthConfig& config) {
    SynthRun r;
    r.data = generate(config);
    IngestOptions o;
    o.year = config.year;
    r.pool = ingest(r.data.households, o);
    r.agg = aggregate(std::span<const ScaledSeries>(r.pool.accepted), config.year);
    return r;
}

/// Wraps a full-year vector as an accepted, already scaled series.
inline ScaledSeries scaled_of(std::string id, int year, std::vector<double> kw) {
    std::vector<Quality> q(kw.size(), Quality::Valid);
    ScaledSeries s;
    s.series = RawSeries(std::move(id), Timestamp::from(first_day(year)), std::move(kw), std::move(q));
    s.year = year;
    s.coverage = 1.0;
    return s;
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("slp_" + tag + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace slp::testing
