#pragma once

#include "slp/calendar.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace slp {

enum class Quality : std::uint8_t { Valid = 0, Missing = 1, Defective = 2, Excluded = 3 };

std::string_view to_string(Quality q);

/// One meter's load on a contiguous quarter-hour grid starting at `start()`.
/// Slots without a measurement carry the flag Missing and a NaN value.
class RawSeries {
public:
    RawSeries() = default;
    RawSeries(std::string meter_id, Timestamp start, std::vector<double> values, std::vector<Quality> quality);

    const std::string& meter_id() const noexcept { return meter_id_; }
    Timestamp start() const noexcept { return start_; }
    Timestamp end() const noexcept { return start_ + static_cast<std::int64_t>(values_.size()); }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    Timestamp timestamp(std::size_t i) const { return start_ + static_cast<std::int64_t>(i); }
    double value(std::size_t i) const { return values_[i]; }
    Quality quality(std::size_t i) const { return quality_[i]; }
    bool valid(std::size_t i) const { return quality_[i] == Quality::Valid; }

    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<Quality>& flags() const noexcept { return quality_; }
    std::vector<Quality>& mutable_flags() noexcept { return quality_; }
    std::vector<double>& mutable_values() noexcept { return values_; }

    std::size_t count(Quality q) const;

private:
    std::string meter_id_;
    Timestamp start_;
    std::vector<double> values_;
    std::vector<Quality> quality_;
};

/// Meter file: a header line, then `timestamp,value_kW` rows in any order.
RawSeries parse_series(std::istream& in, std::string meter_id);
RawSeries read_series(const std::filesystem::path& path, std::string meter_id);
void write_series(std::ostream& out, const RawSeries& series);

struct QualityRules {
    bool reject_negative = true;
    /// Runs of an identical nonzero value longer than this are stuck-meter data.
    std::size_t max_constant_run = 96;
    /// Slots above spike_factor x the spike_quantile of observed values are spikes.
    double spike_factor = 20.0;
    double spike_quantile = 0.99;
};

/// Re-flags Valid points that violate the rules as Defective. Rule statistics are
/// taken over all observed (non-Missing) values, which makes the operation
/// idempotent and order-independent with respect to apply_exclusions.
RawSeries flag_defects(const RawSeries& series, const QualityRules& rules = {});

struct ProsumerRules {
    /// Feed-in: any observed value below this is generation.
    double feed_in_threshold_kw = 0.0;
    double ev_level_above_median_kw = 5.0;
    std::size_t ev_min_block_slots = 8;
    std::size_t ev_min_occurrences = 10;
};

/// Photovoltaic feed-in or electric-vehicle charging signature. Observed values
/// are inspected regardless of their Defective flag, since the negativity rule
/// would otherwise hide feed-in.
bool is_prosumer(const RawSeries& series, const ProsumerRules& rules = {});
bool has_feed_in(const RawSeries& series, const ProsumerRules& rules = {});
bool has_ev_charging(const RawSeries& series, const ProsumerRules& rules = {});

struct ExclusionWindow {
    Date start;
    Date end;  // inclusive
    std::string label;
};

std::vector<ExclusionWindow> parse_exclusions(std::istream& in);
std::vector<ExclusionWindow> load_exclusions(const std::filesystem::path& path);

RawSeries apply_exclusions(const RawSeries& series, const std::vector<ExclusionWindow>& windows);

/// The civil year `year` on a full grid; slots outside the source span are Missing.
RawSeries slice_year(const RawSeries& series, int year);

/// Fraction of the civil year's slots that are Valid.
double coverage(const RawSeries& series, int year);

inline constexpr double kMinCoverage = 0.95;
inline constexpr double kTargetAnnualKwh = 1000.0;

struct ScaledSeries {
    RawSeries series;  // full civil-year grid
    int year = 0;
    double scale_factor = 1.0;
    double coverage = 0.0;
};

/// Percentual scaling to `target_kwh` per year: valid values are multiplied so
/// that their energy equals target_kwh x coverage. Uses the civil year of the
/// series start. Throws CoverageError below 95 % coverage and DataError for a
/// zero-energy series.
ScaledSeries scale_to_annual(const RawSeries& series, double target_kwh = kTargetAnnualKwh);
ScaledSeries scale_to_annual(const RawSeries& series, int year, double target_kwh = kTargetAnnualKwh);

struct Rejection {
    std::string meter_id;
    std::string reason;  // "prosumer", "coverage" or "empty"
    std::string detail;
};

struct IngestOptions {
    int year = 0;
    QualityRules quality{};
    ProsumerRules prosumer{};
    std::vector<ExclusionWindow> exclusions;
    bool drop_prosumers = true;
    double target_kwh = kTargetAnnualKwh;
};

struct IngestResult {
    std::vector<ScaledSeries> accepted;
    std::vector<Rejection> rejected;
    /// Defective slots flagged per accepted meter, same order as `accepted`.
    std::vector<std::size_t> defective_slots;
};

/// Slice to the year, drop prosumers, flag defects, apply exclusions, scale.
/// Rejections are reported instead of thrown.
IngestResult ingest(std::span<const RawSeries> series, const IngestOptions& options);

}  // namespace slp
