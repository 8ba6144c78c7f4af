#pragma once
// Gradient-boosted decision trees over small-integer count features:
// one-vs-rest logistic boosting with exact greedy split search, stratified
// train/test splitting, and evaluation (per-class F1, per-country
// precision-recall curves, gain importances).

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "repsig/events.hpp"
#include "repsig/taxonomy.hpp"

namespace repsig {

// A labelled example for the four-way routing problem.
struct TrainingInstance {
    std::array<std::uint64_t, kNumCategories> features{};
    TargetClass target = TargetClass::Others;
    Country country = Country::US;
    std::string content_id;
};

// Generic column view the trainer operates on; rows are integer feature
// vectors of uniform width.
struct Dataset {
    std::vector<std::vector<std::int64_t>> rows;
    std::vector<int> labels;  // 0 .. n_classes-1
    std::vector<Country> countries;
    std::vector<std::string> ids;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;

    std::size_t size() const { return rows.size(); }
    std::size_t n_features() const {
        return rows.empty() ? feature_names.size() : rows.front().size();
    }
    int n_classes() const { return static_cast<int>(class_names.size()); }
};

Dataset make_dataset(std::span<const TrainingInstance> instances);

struct Hyperparams {
    int n_trees = 200;  // per class
    int max_depth = 3;
    double learning_rate = 0.1;
    int min_leaf = 20;
};

// Internal nodes carry (feature, threshold, gain); x[feature] <= threshold
// goes left. Leaves carry the learning-rate-scaled log-odds contribution.
struct TreeNode {
    int feature = -1;
    std::int64_t threshold = 0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf contribution
    double gain = 0.0;   // split gain, 0 for leaves

    bool is_leaf() const { return feature < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;

    double predict(std::span<const std::int64_t> row) const;
};

struct GbdtModel {
    Hyperparams hp;
    std::uint64_t seed = 0;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;
    std::vector<double> base_score;        // prior log-odds per class
    std::vector<std::vector<Tree>> trees;  // [class][round]
};

// Per-class one-vs-rest train logistic loss after each boosting round.
struct TrainLog {
    std::vector<std::vector<double>> loss_per_round;  // [class][round]
};

// Deterministic stratified split; every class's test share is within one
// item of test_fraction.
struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

SplitIndices split_train_test(const Dataset& data, double test_fraction,
                              std::uint64_t seed);

GbdtModel train(const Dataset& data, std::span<const std::size_t> train_idx,
                const Hyperparams& hp, std::uint64_t seed,
                TrainLog* log = nullptr);

// Raw per-class scores F_k(x) = base + sum of tree contributions.
std::vector<double> predict_scores(const GbdtModel& model,
                                   std::span<const std::int64_t> row);

// sigmoid(F_k) normalized across classes; sums to 1.
std::vector<double> predict_proba(const GbdtModel& model,
                                  std::span<const std::int64_t> row);

// Total split gain per feature, normalized to sum 1 (all zeros when the
// model never split).
std::vector<double> gain_importances(const GbdtModel& model);

struct PrPoint {
    double threshold = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

struct PrCurve {
    std::string class_name;
    std::optional<Country> country;  // nullopt = pooled over the test set
    double prevalence = 0.0;
    std::vector<PrPoint> points;  // thresholds ascending
};

struct EvalReport {
    std::size_t n_test = 0;
    std::map<std::string, double> f1;  // one-vs-rest at argmax decision
    std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
    std::map<std::string, double> importances;        // by feature name
    std::map<Country, std::map<std::string, double>> f1_per_country;
    std::vector<PrCurve> pr_curves;
};

EvalReport evaluate(const GbdtModel& model, const Dataset& data,
                    std::span<const std::size_t> test_idx);

// Macro-averaged one-vs-rest F1 of a predictor that always answers with
// the majority class of `train_idx`.
double majority_baseline_macro_f1(const Dataset& data,
                                  std::span<const std::size_t> train_idx,
                                  std::span<const std::size_t> test_idx);
double macro_f1(const EvalReport& report);

std::string model_to_json(const GbdtModel& model);
GbdtModel model_from_json(const std::string& text);

std::string eval_to_json(const EvalReport& report);
std::string pr_curve_to_csv(const PrCurve& curve);

}  // namespace repsig
