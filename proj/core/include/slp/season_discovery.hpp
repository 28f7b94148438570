#pragma once

#include "slp/calendar.hpp"
#include "slp/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace slp {

/// One min-max scaled 96-value row per complete day of an aggregate.
class DayShapeMatrix {
public:
    DayShapeMatrix() = default;
    DayShapeMatrix(std::vector<Date> days, std::vector<double> rows, std::size_t dim);

    std::size_t rows() const noexcept { return days_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(data_).subspan(i * dim_, dim_);
    }
    const std::vector<Date>& days() const noexcept { return days_; }

private:
    std::vector<Date> days_;
    std::vector<double> data_;
    std::size_t dim_ = 0;
};

/// Scales values to [0, 1] by their own min and max; a constant row becomes 0.5.
std::vector<double> min_max_scale(std::span<const double> values);

/// Drops incomplete days; throws DataError if none remain.
DayShapeMatrix build_day_matrix(const AggregateSeries& agg);

struct ClusterResult {
    int k = 0;
    std::vector<int> assignments;
    std::vector<double> centroids;  // k x dim, row-major
    double inertia = 0.0;
    double silhouette = 0.0;
    std::uint64_t seed = 0;
    int iterations = 0;
    /// Inertia after every assignment step; non-increasing.
    std::vector<double> inertia_trace;
};

inline constexpr int kMaxKmeansIterations = 300;

/// Lloyd iterations from a k-means++ start (Euclidean) until the assignment is a
/// fixpoint or 300 iterations. Deterministic for a fixed seed. Fills the
/// silhouette. Throws ConfigError for k < 2 or k > rows.
ClusterResult kmeans(const DayShapeMatrix& matrix, int k, std::uint64_t seed);

/// Pairwise Euclidean distances, reused across silhouette evaluations.
class DistanceMatrix {
public:
    explicit DistanceMatrix(const DayShapeMatrix& matrix);
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    std::size_t size() const noexcept { return n_; }

private:
    std::size_t n_;
    std::vector<double> d_;
};

/// Mean silhouette. Points in singleton clusters score 0; empty clusters are
/// ignored when searching the nearest other cluster.
double silhouette(const DayShapeMatrix& matrix, std::span<const int> assignments, int k);
double silhouette(const DistanceMatrix& distances, std::span<const int> assignments, int k);

struct KScore {
    int k;
    double mean_silhouette;
    double best_silhouette;
};

struct ChooseKResult {
    ClusterResult best;
    std::vector<KScore> scores;
    /// Winning silhouette below 0.25: the cluster structure is weak.
    bool weak = false;
};

inline constexpr double kWeakSilhouette = 0.25;

/// For each k, runs every seed and scores k by the mean silhouette over seeds.
/// Returns the best-silhouette run of the winning k; ties go to the smaller k.
ChooseKResult choose_k(const DayShapeMatrix& matrix, int k_min = 2, int k_max = 8, std::span<const std::uint64_t> seeds = {});

/// Ten seeds, 1 ... 10.
std::vector<std::uint64_t> default_seeds();

struct WeekShare {
    IsoWeek week;
    int days = 0;
    std::vector<double> shares;  // one per cluster, sums to 1
};

/// Share of each cluster among the days of every ISO week, in date order.
std::vector<WeekShare> weekly_occupancy(const ClusterResult& result, std::span<const Date> days);

struct DetectedTransition {
    Date date;
    Season from;
    Season to;
};

/// Majority calendar season of the days in each cluster.
std::vector<Season> cluster_seasons(const ClusterResult& result, std::span<const Date> days,
                                    const CalendarConfig& calendar);

/// Labels each day with its cluster's season, takes the majority per ISO week and
/// records a changeover wherever the weekly majority flips and holds for at
/// least two weeks. The changeover date is the split point within the two weeks
/// around the flip that best separates the daily labels. Throws DataError if no
/// stable flip exists.
std::vector<DetectedTransition> detect_transitions(const ClusterResult& result, std::span<const Date> days,
                                                   const CalendarConfig& calendar);

/// Calendar whose season boundaries are the detected changeovers.
CalendarConfig calendar_from_transitions(const CalendarConfig& base, std::span<const DetectedTransition> transitions);

}  // namespace slp
