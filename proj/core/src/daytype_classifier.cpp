#include "slp/daytype_classifier.hpp"

#include "slp/errors.hpp"
#include "slp/season_discovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace slp {

namespace {

struct TrainData {
    std::span<const std::vector<double>> x;
    std::span<const int> y;
    int n_classes;
};

double gini(std::span<const double> counts, double total) {
    if (total <= 0.0) return 0.0;
    double s = 1.0;
    for (double c : counts) {
        const double p = c / total;
        s -= p * p;
    }
    return s;
}

class TreeBuilder {
public:
    TreeBuilder(const TrainData& data, const ForestParams& params, std::size_t mtry, std::mt19937_64& rng)
        : data_(data), params_(params), mtry_(mtry), rng_(rng) {}

    DecisionTree build(std::vector<std::size_t> samples) {
        DecisionTree tree;
        grow(tree, std::move(samples), 0);
        return tree;
    }

private:
    int make_leaf(DecisionTree& tree, const std::vector<double>& counts, double total) {
        DecisionTree::Node node;
        node.distribution.resize(counts.size());
        for (std::size_t c = 0; c < counts.size(); ++c) node.distribution[c] = counts[c] / total;
        node.majority = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
        tree.nodes_.push_back(std::move(node));
        return static_cast<int>(tree.nodes_.size()) - 1;
    }

    int grow(DecisionTree& tree, std::vector<std::size_t> samples, int depth) {
        const auto nc = static_cast<std::size_t>(data_.n_classes);
        std::vector<double> counts(nc, 0.0);
        for (std::size_t s : samples) counts[static_cast<std::size_t>(data_.y[s])] += 1.0;
        const auto total = static_cast<double>(samples.size());
        const bool pure = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) <= 1;
        if (pure || depth >= params_.max_depth || samples.size() < 2) return make_leaf(tree, counts, total);

        const std::size_t n_features = data_.x[samples.front()].size();
        std::vector<std::size_t> order(n_features);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng_);

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_score = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> sorted = samples;
        std::vector<double> left(nc), right(nc);
        for (std::size_t tried = 0; tried < order.size(); ++tried) {
            // Beyond mtry, keep looking only until some valid split exists.
            if (tried >= mtry_ && best_feature >= 0) break;
            const std::size_t f = order[tried];
            std::sort(sorted.begin(), sorted.end(),
                      [&](std::size_t a, std::size_t b) { return data_.x[a][f] < data_.x[b][f]; });
            std::fill(left.begin(), left.end(), 0.0);
            right = counts;
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                const auto c = static_cast<std::size_t>(data_.y[sorted[i]]);
                left[c] += 1.0;
                right[c] -= 1.0;
                const double xi = data_.x[sorted[i]][f];
                const double xn = data_.x[sorted[i + 1]][f];
                if (!(xi < xn)) continue;
                const auto nl = static_cast<double>(i + 1);
                const double nr = total - nl;
                const double score = (nl * gini(left, nl) + nr * gini(right, nr)) / total;
                if (score < best_score) {
                    best_score = score;
                    best_feature = static_cast<int>(f);
                    best_threshold = 0.5 * (xi + xn);
                    // Midpoint can round onto xn for adjacent doubles.
                    if (!(best_threshold < xn)) best_threshold = xi;
                }
            }
        }
        if (best_feature < 0) return make_leaf(tree, counts, total);

        std::vector<std::size_t> lo, hi;
        for (std::size_t s : samples)
            (data_.x[s][static_cast<std::size_t>(best_feature)] <= best_threshold ? lo : hi).push_back(s);

        const int id = static_cast<int>(tree.nodes_.size());
        tree.nodes_.emplace_back();
        tree.nodes_[static_cast<std::size_t>(id)].feature = best_feature;
        tree.nodes_[static_cast<std::size_t>(id)].threshold = best_threshold;
        const int l = grow(tree, std::move(lo), depth + 1);
        const int r = grow(tree, std::move(hi), depth + 1);
        tree.nodes_[static_cast<std::size_t>(id)].left = l;
        tree.nodes_[static_cast<std::size_t>(id)].right = r;
        return id;
    }

    const TrainData& data_;
    const ForestParams& params_;
    std::size_t mtry_;
    std::mt19937_64& rng_;
};

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

}  // namespace

const DecisionTree::Node& DecisionTree::leaf_for(std::span<const double> x) const {
    const Node* node = &nodes_.front();
    while (node->feature >= 0) {
        const auto f = static_cast<std::size_t>(node->feature);
        node = &nodes_[static_cast<std::size_t>(x[f] <= node->threshold ? node->left : node->right)];
    }
    return *node;
}

int DecisionTree::depth() const {
    std::vector<int> d(nodes_.size(), 0);
    int deepest = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        deepest = std::max(deepest, d[i]);
        if (nodes_[i].feature >= 0) {
            d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
        }
    }
    return deepest;
}

RandomForest RandomForest::train(std::span<const std::vector<double>> features, std::span<const int> labels,
                                 const ForestParams& params) {
    if (features.empty() || features.size() != labels.size()) throw ConfigError("forest needs one label per example");
    if (params.n_trees < 1 || params.max_depth < 0) throw ConfigError("invalid forest parameters");
    const std::size_t dim = features.front().size();
    if (dim == 0) throw ConfigError("forest features are empty");
    for (const auto& f : features) {
        if (f.size() != dim) throw ConfigError("forest features differ in length");
        for (double v : f)
            if (!std::isfinite(v)) throw DataError("forest feature is not finite");
    }
    const int max_label = *std::max_element(labels.begin(), labels.end());
    if (*std::min_element(labels.begin(), labels.end()) < 0) throw ConfigError("negative class label");
    std::vector<int> per_class(static_cast<std::size_t>(max_label) + 1, 0);
    for (int l : labels) ++per_class[static_cast<std::size_t>(l)];
    for (std::size_t c = 0; c < per_class.size(); ++c)
        if (per_class[c] == 0) throw DataError("class " + std::to_string(c) + " is absent from the training data");

    RandomForest forest;
    forest.n_classes_ = max_label + 1;
    forest.n_features_ = dim;
    forest.params_ = params;
    const std::size_t mtry = params.features_per_split > 0
                                 ? std::min<std::size_t>(static_cast<std::size_t>(params.features_per_split), dim)
                                 : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(dim))));
    const TrainData data{features, labels, forest.n_classes_};
    const std::size_t n = features.size();
    for (int t = 0; t < params.n_trees; ++t) {
        std::seed_seq seq{lo32(params.seed), hi32(params.seed), static_cast<std::uint32_t>(t)};
        std::mt19937_64 rng(seq);
        std::vector<std::size_t> samples(n);
        if (params.bootstrap) {
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            for (auto& s : samples) s = pick(rng);
        } else {
            std::iota(samples.begin(), samples.end(), std::size_t{0});
        }
        TreeBuilder builder(data, params, mtry, rng);
        forest.trees_.push_back(builder.build(std::move(samples)));
    }
    return forest;
}

RandomForest RandomForest::from_trees(std::vector<DecisionTree> trees, int n_classes, std::size_t n_features) {
    if (trees.empty() || n_classes < 1) throw ConfigError("a forest needs at least one tree and one class");
    RandomForest forest;
    forest.trees_ = std::move(trees);
    forest.n_classes_ = n_classes;
    forest.n_features_ = n_features;
    forest.params_.n_trees = static_cast<int>(forest.trees_.size());
    return forest;
}

Prediction RandomForest::predict(std::span<const double> x) const {
    if (x.size() != n_features_) throw ConfigError("feature vector has the wrong length");
    Prediction out;
    out.probabilities.assign(static_cast<std::size_t>(n_classes_), 0.0);
    for (const auto& tree : trees_) out.probabilities[static_cast<std::size_t>(tree.leaf_for(x).majority)] += 1.0;
    for (double& p : out.probabilities) p /= static_cast<double>(trees_.size());
    out.label = static_cast<int>(std::max_element(out.probabilities.begin(), out.probabilities.end()) -
                                 out.probabilities.begin());
    return out;
}

double cross_val_accuracy(std::span<const std::vector<double>> features, std::span<const int> labels,
                          const ForestParams& params, int folds) {
    if (folds < 2) throw ConfigError("cross-validation needs at least two folds");
    if (features.size() != labels.size() || labels.empty()) throw ConfigError("one label per example required");
    const int max_label = *std::max_element(labels.begin(), labels.end());
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(max_label) + 1);
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[static_cast<std::size_t>(labels[i])].push_back(i);

    std::seed_seq seq{lo32(params.seed), hi32(params.seed), 0x5f0dU};
    std::mt19937_64 rng(seq);
    std::vector<int> fold_of(labels.size(), 0);
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& idx = by_class[c];
        if (idx.size() < static_cast<std::size_t>(folds)) {
            throw DataError("class " + std::to_string(c) + " has " + std::to_string(idx.size()) +
                            " examples, fewer than the " + std::to_string(folds) + " folds");
        }
        std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t i = 0; i < idx.size(); ++i) fold_of[idx[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
    }

    double sum = 0.0;
    for (int f = 0; f < folds; ++f) {
        std::vector<std::vector<double>> train_x;
        std::vector<int> train_y;
        std::vector<std::size_t> test;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (fold_of[i] == f) {
                test.push_back(i);
            } else {
                train_x.push_back(features[i]);
                train_y.push_back(labels[i]);
            }
        }
        const RandomForest forest = RandomForest::train(train_x, train_y, params);
        std::size_t hits = 0;
        for (std::size_t i : test)
            if (forest.predict(features[i]).label == labels[i]) ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(test.size());
    }
    return sum / folds;
}

std::vector<double> day_feature(std::span<const double> day_kw) {
    if (day_kw.size() != kSlotsPerDay) throw ConfigError("day feature needs 96 values");
    std::vector<double> out = min_max_scale(day_kw);
    out.reserve(kDayFeatureSize);
    auto max_in = [&](std::size_t a, std::size_t b) { return *std::max_element(day_kw.begin() + a, day_kw.begin() + b); };
    auto mean_in = [&](std::size_t a, std::size_t b) {
        return std::accumulate(day_kw.begin() + a, day_kw.begin() + b, 0.0) / static_cast<double>(b - a);
    };
    const double energy = std::accumulate(day_kw.begin(), day_kw.end(), 0.0) * kHoursPerSlot;
    const double morning = max_in(24, 40);  // 06:00-10:00
    const double evening = max_in(68, 88);  // 17:00-22:00
    const double night = mean_in(0, 20);    // 00:00-05:00
    const double day = mean_in(32, 80);     // 08:00-20:00
    out.push_back(energy);
    out.push_back(evening > 0.0 ? morning / evening : 0.0);
    out.push_back(day > 0.0 ? night / day : 0.0);
    out.push_back(static_cast<double>(std::max_element(day_kw.begin(), day_kw.end()) - day_kw.begin()));
    return out;
}

bool is_special_day(Date date, const CalendarConfig& calendar) {
    if (calendar.is_holiday(date)) return true;
    return month_of(date) == 12 && (day_of_month(date) == 24 || day_of_month(date) == 31);
}

LabelledDays training_days(const AggregateSeries& agg, const CalendarConfig& calendar) {
    LabelledDays out;
    for (int day = 0; day < agg.days(); ++day) {
        const Date date = agg.date(day);
        if (!agg.complete_day(day) || is_special_day(date, calendar)) continue;
        out.dates.push_back(date);
        out.features.push_back(day_feature(agg.day_values(day)));
        out.labels.push_back(static_cast<int>(classify_day(date, calendar)));
    }
    return out;
}

RandomForest train_day_types(const LabelledDays& days, const ForestParams& params) {
    return RandomForest::train(days.features, days.labels, params);
}

AuditReport audit_special_days(const RandomForest& model, const AggregateSeries& agg, const CalendarConfig& calendar) {
    AuditReport report;
    for (int day = 0; day < agg.days(); ++day) {
        const Date date = agg.date(day);
        if (!is_special_day(date, calendar) || !agg.complete_day(day)) continue;
        std::string category = calendar.is_holiday(date) ? "holiday"
                               : day_of_month(date) == 24 ? "christmas_eve"
                                                          : "new_years_eve";
        const Prediction p = model.predict(day_feature(agg.day_values(day)));
        AuditEntry e{date, std::move(category), classify_day(date, calendar), static_cast<DayType>(p.label), {}};
        for (std::size_t c = 0; c < 3 && c < p.probabilities.size(); ++c) e.probabilities[c] = p.probabilities[c];
        report.entries.push_back(std::move(e));
    }
    for (const char* category : {"holiday", "christmas_eve", "new_years_eve"}) {
        std::array<int, 3> votes{};
        int n = 0;
        for (const auto& e : report.entries) {
            if (e.category != category) continue;
            ++votes[static_cast<std::size_t>(e.predicted)];
            ++n;
        }
        if (n == 0) continue;
        const auto top = std::max_element(votes.begin(), votes.end());
        report.summary.push_back({category, static_cast<DayType>(top - votes.begin()), static_cast<double>(*top) / n, n});
    }
    return report;
}

}  // namespace slp
