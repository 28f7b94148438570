#include "slp/season_discovery.hpp"

#include "slp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>

namespace slp {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

ClusterResult lloyd(const DayShapeMatrix& m, int k, std::uint64_t seed) {
    const std::size_t n = m.rows();
    const std::size_t dim = m.dim();
    if (k < 2) throw ConfigError("k-means needs k >= 2");
    if (static_cast<std::size_t>(k) > n) {
        throw ConfigError("k-means with k = " + std::to_string(k) + " exceeds the " + std::to_string(n) + " rows");
    }
    const auto kk = static_cast<std::size_t>(k);
    std::mt19937_64 rng(seed);

    // k-means++ seeding.
    std::vector<double> centroids(kk * dim);
    std::vector<bool> chosen(n, false);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    std::copy_n(m.row(first).begin(), dim, centroids.begin());
    chosen[first] = true;
    for (std::size_t c = 1; c < kk; ++c) {
        const std::span<const double> last(centroids.data() + (c - 1) * dim, dim);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], squared_distance(m.row(i), last));
            if (!chosen[i]) total += nearest[i];
        }
        std::size_t pick = n;
        if (total > 0.0) {
            double r = std::uniform_real_distribution<double>(0.0, total)(rng);
            for (std::size_t i = 0; i < n; ++i) {
                if (chosen[i]) continue;
                pick = i;
                r -= nearest[i];
                if (r < 0.0) break;
            }
        } else {
            std::vector<std::size_t> free;
            for (std::size_t i = 0; i < n; ++i)
                if (!chosen[i]) free.push_back(i);
            pick = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
        }
        chosen[pick] = true;
        std::copy_n(m.row(pick).begin(), dim, centroids.begin() + static_cast<std::ptrdiff_t>(c * dim));
    }

    ClusterResult out;
    out.k = k;
    out.seed = seed;
    std::vector<int> assign(n, -1);
    std::vector<double> dist(n);
    for (int iter = 1; iter <= kMaxKmeansIterations; ++iter) {
        bool changed = false;
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < kk; ++c) {
                const double d = squared_distance(m.row(i), std::span<const double>(centroids.data() + c * dim, dim));
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(c);
                }
            }
            if (assign[i] != best) changed = true;
            assign[i] = best;
            dist[i] = best_d;
            inertia += best_d;
        }
        out.inertia_trace.push_back(inertia);
        out.iterations = iter;
        out.inertia = inertia;
        if (!changed) break;

        std::vector<double> sums(kk * dim, 0.0);
        std::vector<std::size_t> counts(kk, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(assign[i]);
            ++counts[c];
            const auto row = m.row(i);
            for (std::size_t j = 0; j < dim; ++j) sums[c * dim + j] += row[j];
        }
        for (std::size_t c = 0; c < kk; ++c) {
            if (counts[c] == 0) {
                // Re-seed an empty cluster with the point farthest from its centroid.
                const auto far = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
                std::copy_n(m.row(far).begin(), dim, centroids.begin() + static_cast<std::ptrdiff_t>(c * dim));
                dist[far] = 0.0;
                continue;
            }
            for (std::size_t j = 0; j < dim; ++j) centroids[c * dim + j] = sums[c * dim + j] / static_cast<double>(counts[c]);
        }
    }
    out.assignments = std::move(assign);
    out.centroids = std::move(centroids);
    return out;
}

template <typename Dist>
double silhouette_impl(std::size_t n, std::span<const int> assignments, int k, Dist&& dist) {
    if (assignments.size() != n) throw ConfigError("silhouette: assignment count differs from row count");
    if (k < 2) throw ConfigError("silhouette needs k >= 2");
    const auto kk = static_cast<std::size_t>(k);
    std::vector<std::size_t> size(kk, 0);
    for (int a : assignments) {
        if (a < 0 || a >= k) throw ConfigError("silhouette: cluster id out of range");
        ++size[static_cast<std::size_t>(a)];
    }
    double total = 0.0;
    std::vector<double> sums(kk);
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(assignments[i]);
        if (size[own] <= 1) continue;
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) sums[static_cast<std::size_t>(assignments[j])] += dist(i, j);
        const double a = sums[own] / static_cast<double>(size[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < kk; ++c)
            if (c != own && size[c] > 0) b = std::min(b, sums[c] / static_cast<double>(size[c]));
        if (!std::isfinite(b)) continue;
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / static_cast<double>(n);
}

}  // namespace

DayShapeMatrix::DayShapeMatrix(std::vector<Date> days, std::vector<double> rows, std::size_t dim)
    : days_(std::move(days)), data_(std::move(rows)), dim_(dim) {
    if (data_.size() != days_.size() * dim_) throw ConfigError("day matrix rows do not match its day index");
}

std::vector<double> min_max_scale(std::span<const double> values) {
    std::vector<double> out(values.size(), 0.5);
    if (values.empty()) return out;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) return out;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *lo) / range;
    return out;
}

DayShapeMatrix build_day_matrix(const AggregateSeries& agg) {
    std::vector<Date> days;
    std::vector<double> rows;
    for (int day = 0; day < agg.days(); ++day) {
        if (!agg.complete_day(day)) continue;
        days.push_back(agg.date(day));
        const auto scaled = min_max_scale(agg.day_values(day));
        rows.insert(rows.end(), scaled.begin(), scaled.end());
    }
    if (days.empty()) throw DataError("aggregate has no complete day to cluster");
    return DayShapeMatrix(std::move(days), std::move(rows), kSlotsPerDay);
}

ClusterResult kmeans(const DayShapeMatrix& matrix, int k, std::uint64_t seed) {
    ClusterResult out = lloyd(matrix, k, seed);
    out.silhouette = silhouette(matrix, out.assignments, k);
    return out;
}

DistanceMatrix::DistanceMatrix(const DayShapeMatrix& matrix) : n_(matrix.rows()), d_(n_ * n_, 0.0) {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double d = std::sqrt(squared_distance(matrix.row(i), matrix.row(j)));
            d_[i * n_ + j] = d;
            d_[j * n_ + i] = d;
        }
}

double silhouette(const DayShapeMatrix& matrix, std::span<const int> assignments, int k) {
    return silhouette_impl(matrix.rows(), assignments, k, [&](std::size_t i, std::size_t j) {
        return std::sqrt(squared_distance(matrix.row(i), matrix.row(j)));
    });
}

double silhouette(const DistanceMatrix& distances, std::span<const int> assignments, int k) {
    return silhouette_impl(distances.size(), assignments, k, distances);
}

std::vector<std::uint64_t> default_seeds() {
    std::vector<std::uint64_t> s(10);
    std::iota(s.begin(), s.end(), std::uint64_t{1});
    return s;
}

ChooseKResult choose_k(const DayShapeMatrix& matrix, int k_min, int k_max, std::span<const std::uint64_t> seeds) {
    if (k_min < 2 || k_max < k_min) throw ConfigError("invalid k range");
    if (static_cast<std::size_t>(k_max) > matrix.rows()) {
        throw ConfigError("k range up to " + std::to_string(k_max) + " exceeds the " + std::to_string(matrix.rows()) +
                          " rows");
    }
    const std::vector<std::uint64_t> fallback = default_seeds();
    if (seeds.empty()) seeds = fallback;

    const DistanceMatrix distances(matrix);
    ChooseKResult out;
    double best_mean = -std::numeric_limits<double>::infinity();
    for (int k = k_min; k <= k_max; ++k) {
        std::vector<ClusterResult> runs;
        double sum = 0.0;
        for (std::uint64_t seed : seeds) {
            ClusterResult r = lloyd(matrix, k, seed);
            r.silhouette = silhouette(distances, r.assignments, k);
            sum += r.silhouette;
            runs.push_back(std::move(r));
        }
        const auto best = std::max_element(runs.begin(), runs.end(), [](const auto& a, const auto& b) {
            return a.silhouette < b.silhouette;
        });
        const double mean = sum / static_cast<double>(runs.size());
        out.scores.push_back({k, mean, best->silhouette});
        if (mean > best_mean) {
            best_mean = mean;
            out.best = std::move(*best);
        }
    }
    out.weak = out.best.silhouette < kWeakSilhouette;
    return out;
}

std::vector<WeekShare> weekly_occupancy(const ClusterResult& result, std::span<const Date> days) {
    if (days.size() != result.assignments.size()) throw ConfigError("occupancy: day index does not match assignments");
    std::vector<std::size_t> order(days.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return days[a] < days[b]; });

    std::vector<WeekShare> out;
    for (std::size_t i : order) {
        const IsoWeek w = iso_week(days[i]);
        if (out.empty() || !(out.back().week == w)) {
            out.push_back({w, 0, std::vector<double>(static_cast<std::size_t>(result.k), 0.0)});
        }
        out.back().shares[static_cast<std::size_t>(result.assignments[i])] += 1.0;
        ++out.back().days;
    }
    for (auto& w : out)
        for (double& s : w.shares) s /= static_cast<double>(w.days);
    return out;
}

std::vector<Season> cluster_seasons(const ClusterResult& result, std::span<const Date> days,
                                    const CalendarConfig& calendar) {
    if (days.size() != result.assignments.size()) throw ConfigError("cluster seasons: day index does not match");
    std::vector<std::array<int, 3>> counts(static_cast<std::size_t>(result.k), std::array<int, 3>{});
    for (std::size_t i = 0; i < days.size(); ++i)
        ++counts[static_cast<std::size_t>(result.assignments[i])][static_cast<std::size_t>(season_of(days[i], calendar))];
    std::vector<Season> out;
    for (const auto& c : counts)
        out.push_back(static_cast<Season>(std::max_element(c.begin(), c.end()) - c.begin()));
    return out;
}

std::vector<DetectedTransition> detect_transitions(const ClusterResult& result, std::span<const Date> days,
                                                   const CalendarConfig& calendar) {
    const auto label_of = cluster_seasons(result, days, calendar);
    std::vector<std::size_t> order(days.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return days[a] < days[b]; });

    std::vector<Date> dates;
    std::vector<Season> labels;
    for (std::size_t i : order) {
        dates.push_back(days[i]);
        labels.push_back(label_of[static_cast<std::size_t>(result.assignments[i])]);
    }

    // Weekly majority labels; week_start[w] indexes into dates.
    std::vector<std::size_t> week_start;
    std::vector<Season> week_label;
    for (std::size_t i = 0; i < dates.size();) {
        const IsoWeek w = iso_week(dates[i]);
        std::array<int, 3> c{};
        std::size_t j = i;
        while (j < dates.size() && iso_week(dates[j]) == w) ++c[static_cast<std::size_t>(labels[j++])];
        const int top = *std::max_element(c.begin(), c.end());
        Season label = static_cast<Season>(std::max_element(c.begin(), c.end()) - c.begin());
        if (!week_label.empty() && c[static_cast<std::size_t>(week_label.back())] == top) label = week_label.back();
        week_start.push_back(i);
        week_label.push_back(label);
        i = j;
    }
    week_start.push_back(dates.size());

    std::vector<DetectedTransition> out;
    if (week_label.empty()) throw DataError("no days to detect season transitions in");
    Season current = week_label.front();
    for (std::size_t w = 1; w + 1 < week_label.size(); ++w) {
        if (week_label[w] == current || week_label[w + 1] != week_label[w]) continue;
        const Season to = week_label[w];
        const std::size_t lo = week_start[w >= 2 ? w - 2 : 0];
        const std::size_t hi = week_start[std::min(w + 2, week_label.size())];
        // Split index s: days [lo, s) belong to `current`, [s, hi) to `to`.
        std::vector<int> mistakes;
        int best = std::numeric_limits<int>::max();
        for (std::size_t s = lo; s <= hi; ++s) {
            int m = 0;
            for (std::size_t i = lo; i < hi; ++i) {
                if (i < s && labels[i] == to) ++m;
                if (i >= s && labels[i] == current) ++m;
            }
            mistakes.push_back(m);
            best = std::min(best, m);
        }
        std::vector<std::size_t> ties;
        for (std::size_t s = lo; s <= hi; ++s)
            if (mistakes[s - lo] == best) ties.push_back(s);
        const std::size_t split = std::min(ties[(ties.size() - 1) / 2], dates.size() - 1);
        out.push_back({dates[split], current, to});
        current = to;
    }
    if (out.empty()) throw DataError("no stable season changeover found; set season boundaries manually");
    return out;
}

CalendarConfig calendar_from_transitions(const CalendarConfig& base, std::span<const DetectedTransition> transitions) {
    if (transitions.empty()) throw DataError("no season transitions to build a calendar from");
    std::vector<SeasonBoundary> boundaries;
    const auto jan1 = std::chrono::January / 1;
    const Date first = transitions.front().date;
    if (transitions.front().from != transitions.back().to && !(month_of(first) == 1 && day_of_month(first) == 1)) {
        boundaries.push_back({jan1, transitions.front().from});
    }
    for (const auto& t : transitions) {
        const std::chrono::month_day md{std::chrono::month{month_of(t.date)}, std::chrono::day{day_of_month(t.date)}};
        boundaries.push_back({md, t.to});
    }
    return base.with_boundaries(std::move(boundaries));
}

}  // namespace slp
