#pragma once

#include "slp/calendar.hpp"
#include "slp/model.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace slp {

/// CART classification tree with axis-aligned splits chosen by Gini impurity.
class DecisionTree {
public:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        std::vector<double> distribution;  // class shares of the training samples at the leaf
        int majority = 0;
    };

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const Node& leaf_for(std::span<const double> x) const;
    int depth() const;

    // Built by RandomForest::train.
    std::vector<Node> nodes_;
};

struct ForestParams {
    int n_trees = 100;
    int max_depth = 12;
    /// Features tried per split; 0 means floor(sqrt(feature count)).
    int features_per_split = 0;
    bool bootstrap = true;
    std::uint64_t seed = 1;
};

struct Prediction {
    int label = 0;
    std::vector<double> probabilities;  // vote shares per class
};

/// Random forest over dense feature vectors with integer labels 0 ... n_classes-1.
class RandomForest {
public:
    /// Throws ConfigError on ragged features, and DataError when a class in
    /// 0 ... max label has no example.
    static RandomForest train(std::span<const std::vector<double>> features, std::span<const int> labels,
                              const ForestParams& params = {});

    /// Wraps trees that were built elsewhere.
    static RandomForest from_trees(std::vector<DecisionTree> trees, int n_classes, std::size_t n_features);

    /// Majority vote of the trees' leaf majorities; ties go to the lower label.
    Prediction predict(std::span<const double> x) const;

    int n_classes() const noexcept { return n_classes_; }
    std::size_t n_features() const noexcept { return n_features_; }
    const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
    const ForestParams& params() const noexcept { return params_; }

private:
    std::vector<DecisionTree> trees_;
    int n_classes_ = 0;
    std::size_t n_features_ = 0;
    ForestParams params_;
};

/// Stratified k-fold mean accuracy. Folds come from a seeded shuffle of each
/// class. Throws DataError when a class has fewer examples than folds.
double cross_val_accuracy(std::span<const std::vector<double>> features, std::span<const int> labels,
                          const ForestParams& params = {}, int folds = 5);

inline constexpr std::size_t kDayFeatureSize = kSlotsPerDay + 4;

/// 96 min-max scaled slot values, then day energy (kWh), morning/evening peak
/// ratio, night/day mean ratio and the peak slot index.
std::vector<double> day_feature(std::span<const double> day_kw);

struct LabelledDays {
    std::vector<Date> dates;
    std::vector<std::vector<double>> features;
    std::vector<int> labels;  // DayType as int
};

bool is_special_day(Date date, const CalendarConfig& calendar);

/// Complete days of the aggregate labelled by the calendar; holidays, Dec 24 and
/// Dec 31 are left out so they cannot leak into the audit.
LabelledDays training_days(const AggregateSeries& agg, const CalendarConfig& calendar);

RandomForest train_day_types(const LabelledDays& days, const ForestParams& params = {});

struct AuditEntry {
    Date date;
    std::string category;  // "holiday", "christmas_eve" or "new_years_eve"
    DayType calendar_label;
    DayType predicted;
    std::array<double, 3> probabilities;
};

struct AuditReport {
    std::vector<AuditEntry> entries;
    /// Majority prediction and its share per category present.
    struct Summary {
        std::string category;
        DayType majority;
        double share;
        int days;
    };
    std::vector<Summary> summary;
};

/// Predicts every complete holiday, Dec 24 and Dec 31 of the aggregate's year.
AuditReport audit_special_days(const RandomForest& model, const AggregateSeries& agg, const CalendarConfig& calendar);

}  // namespace slp
