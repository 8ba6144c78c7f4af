#include "repsig/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "repsig/errors.hpp"
#include "repsig/io.hpp"
#include "repsig/rng.hpp"

namespace repsig {

using nlohmann::json;
using nlohmann::ordered_json;

Dataset make_dataset(std::span<const TrainingInstance> instances) {
    Dataset data;
    data.feature_names.reserve(kNumCategories);
    for (ReportCategory c : kAllCategories) {
        data.feature_names.emplace_back(to_string(c));
    }
    for (TargetClass t : kAllTargetClasses) {
        data.class_names.emplace_back(to_string(t));
    }
    data.rows.reserve(instances.size());
    for (const auto& inst : instances) {
        std::vector<std::int64_t> row(kNumCategories);
        for (std::size_t i = 0; i < kNumCategories; ++i) {
            row[i] = static_cast<std::int64_t>(inst.features[i]);
        }
        data.rows.push_back(std::move(row));
        data.labels.push_back(static_cast<int>(inst.target));
        data.countries.push_back(inst.country);
        data.ids.push_back(inst.content_id);
    }
    return data;
}

double Tree::predict(std::span<const std::int64_t> row) const {
    int node = 0;
    while (!nodes[node].is_leaf()) {
        const TreeNode& n = nodes[node];
        node = row[static_cast<std::size_t>(n.feature)] <= n.threshold
                   ? n.left
                   : n.right;
    }
    return nodes[node].value;
}

SplitIndices split_train_test(const Dataset& data, double test_fraction,
                              std::uint64_t seed) {
    if (!(test_fraction > 0.0) || !(test_fraction < 1.0)) {
        throw ConfigError("split_train_test: test_fraction must be in (0,1)");
    }
    if (data.size() < 2) {
        throw TooFewInstances("split_train_test: need at least 2 instances");
    }
    std::map<int, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < data.size(); ++i) {
        by_label[data.labels[i]].push_back(i);
    }
    Rng rng(derive_seed(seed, "split"));
    SplitIndices out;
    for (auto& [label, idx] : by_label) {
        rng.shuffle(idx);
        auto want = static_cast<std::size_t>(std::llround(
            test_fraction * static_cast<double>(idx.size())));
        if (want >= idx.size()) want = idx.size() - 1;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            (i < want ? out.test : out.train).push_back(idx[i]);
        }
    }
    if (out.test.empty()) {
        // Rounding starved the test set; move one row over.
        out.test.push_back(out.train.back());
        out.train.pop_back();
    }
    if (out.train.empty()) {
        throw TooFewInstances("split_train_test: empty train side");
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

constexpr double kMaxLeafStep = 4.0;
constexpr double kMinGain = 1e-12;
constexpr double kMinHess = 1e-12;

struct SplitCandidate {
    double gain = 0.0;
    int feature = -1;
    std::int64_t threshold = 0;
};

// Exact greedy boosting over presorted feature orders. `order` holds, per
// feature, the training positions sorted by feature value; node membership
// is tracked with a mask and the lists are stably partitioned as the tree
// grows, so nothing is ever re-sorted.
class TreeBuilder {
public:
    TreeBuilder(const Dataset& data, std::span<const std::size_t> rows,
                const std::vector<std::vector<std::size_t>>& root_order,
                const Hyperparams& hp)
        : data_(data), rows_(rows), root_order_(root_order), hp_(hp) {}

    Tree build(std::span<const double> grad, std::span<const double> hess) {
        grad_ = grad;
        hess_ = hess;
        Tree tree;
        build_node(tree, root_order_, 0);
        return tree;
    }

private:
    // order lists hold positions into rows_ (0..m-1).
    int build_node(Tree& tree,
                   const std::vector<std::vector<std::size_t>>& order,
                   int depth) {
        const std::size_t m = order.front().size();
        double g_total = 0.0, h_total = 0.0;
        for (std::size_t pos : order.front()) {
            g_total += grad_[pos];
            h_total += hess_[pos];
        }
        const int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        SplitCandidate best;
        if (depth < hp_.max_depth &&
            m >= 2 * static_cast<std::size_t>(hp_.min_leaf)) {
            best = find_split(order, g_total, h_total);
        }
        if (best.feature < 0) {
            tree.nodes[node_id].value = leaf_value(g_total, h_total);
            return node_id;
        }

        std::vector<std::vector<std::size_t>> left_order(order.size());
        std::vector<std::vector<std::size_t>> right_order(order.size());
        const auto f = static_cast<std::size_t>(best.feature);
        std::vector<char> goes_left(rows_.size(), 0);
        for (std::size_t pos : order[f]) {
            if (value_at(pos, f) <= best.threshold) goes_left[pos] = 1;
        }
        for (std::size_t j = 0; j < order.size(); ++j) {
            left_order[j].reserve(m / 2);
            right_order[j].reserve(m / 2);
            for (std::size_t pos : order[j]) {
                (goes_left[pos] ? left_order[j] : right_order[j])
                    .push_back(pos);
            }
        }
        tree.nodes[node_id].feature = best.feature;
        tree.nodes[node_id].threshold = best.threshold;
        tree.nodes[node_id].gain = best.gain;
        const int left_id = build_node(tree, left_order, depth + 1);
        tree.nodes[node_id].left = left_id;
        const int right_id = build_node(tree, right_order, depth + 1);
        tree.nodes[node_id].right = right_id;
        return node_id;
    }

    SplitCandidate find_split(
        const std::vector<std::vector<std::size_t>>& order, double g_total,
        double h_total) const {
        SplitCandidate best;
        const double parent_score =
            g_total * g_total / std::max(h_total, kMinHess);
        const std::size_t m = order.front().size();
        for (std::size_t f = 0; f < order.size(); ++f) {
            double g_left = 0.0, h_left = 0.0;
            std::size_t n_left = 0;
            const auto& idx = order[f];
            for (std::size_t i = 0; i + 1 < m; ++i) {
                g_left += grad_[idx[i]];
                h_left += hess_[idx[i]];
                ++n_left;
                const std::int64_t v = value_at(idx[i], f);
                if (value_at(idx[i + 1], f) == v) continue;  // not a boundary
                if (n_left < static_cast<std::size_t>(hp_.min_leaf)) continue;
                if (m - n_left < static_cast<std::size_t>(hp_.min_leaf)) {
                    break;
                }
                const double g_right = g_total - g_left;
                const double h_right = h_total - h_left;
                const double gain =
                    g_left * g_left / std::max(h_left, kMinHess) +
                    g_right * g_right / std::max(h_right, kMinHess) -
                    parent_score;
                // Strict improvement keeps the first (lowest feature,
                // lowest threshold) among equal-gain splits.
                if (gain > best.gain + kMinGain) {
                    best.gain = gain;
                    best.feature = static_cast<int>(f);
                    best.threshold = v;
                }
            }
        }
        return best;
    }

    double leaf_value(double g, double h) const {
        double step = g / std::max(h, kMinHess);
        step = std::clamp(step, -kMaxLeafStep, kMaxLeafStep);
        return hp_.learning_rate * step;
    }

    std::int64_t value_at(std::size_t pos, std::size_t feature) const {
        return data_.rows[rows_[pos]][feature];
    }

    const Dataset& data_;
    std::span<const std::size_t> rows_;
    const std::vector<std::vector<std::size_t>>& root_order_;
    const Hyperparams& hp_;
    std::span<const double> grad_;
    std::span<const double> hess_;
};

double clamped_log_odds(double p) {
    const double q = std::clamp(p, 1e-6, 1.0 - 1e-6);
    return std::log(q / (1.0 - q));
}

}  // namespace

GbdtModel train(const Dataset& data, std::span<const std::size_t> train_idx,
                const Hyperparams& hp, std::uint64_t seed, TrainLog* log) {
    if (train_idx.empty()) {
        throw TooFewInstances("train: empty train set");
    }
    if (hp.n_trees <= 0 || hp.max_depth <= 0 || hp.min_leaf <= 0 ||
        !(hp.learning_rate > 0.0)) {
        throw ConfigError("train: hyperparameters must be positive");
    }
    {
        int first = data.labels[train_idx.front()];
        bool mixed = false;
        for (std::size_t i : train_idx) {
            if (data.labels[i] != first) {
                mixed = true;
                break;
            }
        }
        if (!mixed) {
            throw DegenerateTargets(
                "train: all training targets are the same class");
        }
    }

    const std::size_t m = train_idx.size();
    const std::size_t d = data.n_features();
    const int k = data.n_classes();

    // One presort of each feature column, shared by every tree.
    std::vector<std::vector<std::size_t>> root_order(d);
    for (std::size_t f = 0; f < d; ++f) {
        auto& idx = root_order[f];
        idx.resize(m);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) {
                             return data.rows[train_idx[a]][f] <
                                    data.rows[train_idx[b]][f];
                         });
    }

    GbdtModel model;
    model.hp = hp;
    model.seed = seed;
    model.feature_names = data.feature_names;
    model.class_names = data.class_names;
    model.base_score.resize(static_cast<std::size_t>(k));
    model.trees.resize(static_cast<std::size_t>(k));
    if (log) log->loss_per_round.assign(static_cast<std::size_t>(k), {});

    TreeBuilder builder(data, train_idx, root_order, hp);
    std::vector<double> score(m), grad(m), hess(m);
    std::vector<char> y(m);
    for (int cls = 0; cls < k; ++cls) {
        const auto ck = static_cast<std::size_t>(cls);
        std::size_t positives = 0;
        for (std::size_t i = 0; i < m; ++i) {
            y[i] = data.labels[train_idx[i]] == cls ? 1 : 0;
            positives += y[i];
        }
        model.base_score[ck] = clamped_log_odds(
            static_cast<double>(positives) / static_cast<double>(m));
        std::fill(score.begin(), score.end(), model.base_score[ck]);
        model.trees[ck].reserve(static_cast<std::size_t>(hp.n_trees));
        for (int round = 0; round < hp.n_trees; ++round) {
            for (std::size_t i = 0; i < m; ++i) {
                const double p = sigmoid(score[i]);
                grad[i] = static_cast<double>(y[i]) - p;
                hess[i] = p * (1.0 - p);
            }
            Tree tree = builder.build(grad, hess);
            for (std::size_t i = 0; i < m; ++i) {
                score[i] += tree.predict(data.rows[train_idx[i]]);
            }
            model.trees[ck].push_back(std::move(tree));
            if (log) {
                double loss = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    const double p =
                        std::clamp(sigmoid(score[i]), 1e-15, 1.0 - 1e-15);
                    loss -= y[i] ? std::log(p) : std::log1p(-p);
                }
                log->loss_per_round[ck].push_back(
                    loss / static_cast<double>(m));
            }
        }
    }
    return model;
}

std::vector<double> predict_scores(const GbdtModel& model,
                                   std::span<const std::int64_t> row) {
    std::vector<double> scores(model.base_score);
    for (std::size_t cls = 0; cls < model.trees.size(); ++cls) {
        for (const Tree& tree : model.trees[cls]) {
            scores[cls] += tree.predict(row);
        }
    }
    return scores;
}

std::vector<double> predict_proba(const GbdtModel& model,
                                  std::span<const std::int64_t> row) {
    std::vector<double> p = predict_scores(model, row);
    double total = 0.0;
    for (double& v : p) {
        v = sigmoid(v);
        total += v;
    }
    for (double& v : p) v /= total;
    return p;
}

std::vector<double> gain_importances(const GbdtModel& model) {
    std::vector<double> gains(model.feature_names.size(), 0.0);
    double total = 0.0;
    for (const auto& class_trees : model.trees) {
        for (const Tree& tree : class_trees) {
            for (const TreeNode& node : tree.nodes) {
                if (!node.is_leaf()) {
                    gains[static_cast<std::size_t>(node.feature)] += node.gain;
                    total += node.gain;
                }
            }
        }
    }
    if (total > 0.0) {
        for (double& g : gains) g /= total;
    }
    return gains;
}

namespace {

struct BinaryCounts {
    std::size_t tp = 0, fp = 0, fn = 0;

    double f1() const {
        const double denom = static_cast<double>(2 * tp + fp + fn);
        return denom > 0.0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
    }
};

PrCurve make_pr_curve(const std::string& class_name,
                      std::optional<Country> country,
                      std::vector<std::pair<double, bool>> scored) {
    // scored: (probability of the class, is the class) per test row.
    PrCurve curve;
    curve.class_name = class_name;
    curve.country = country;
    std::size_t positives = 0;
    for (const auto& [p, is_pos] : scored) positives += is_pos ? 1u : 0u;
    curve.prevalence =
        static_cast<double>(positives) / static_cast<double>(scored.size());
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    // Sweep descending; a point per distinct threshold with predict-positive
    // rule p >= threshold.
    std::size_t tp = 0, predicted = 0;
    std::vector<PrPoint> points;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        tp += scored[i].second ? 1u : 0u;
        ++predicted;
        const bool boundary =
            i + 1 == scored.size() || scored[i + 1].first != scored[i].first;
        if (!boundary) continue;
        PrPoint pt;
        pt.threshold = scored[i].first;
        pt.precision =
            static_cast<double>(tp) / static_cast<double>(predicted);
        pt.recall = positives > 0 ? static_cast<double>(tp) /
                                        static_cast<double>(positives)
                                  : 0.0;
        points.push_back(pt);
    }
    std::reverse(points.begin(), points.end());  // thresholds ascending
    curve.points = std::move(points);
    return curve;
}

}  // namespace

EvalReport evaluate(const GbdtModel& model, const Dataset& data,
                    std::span<const std::size_t> test_idx) {
    if (test_idx.empty()) {
        throw EmptyTestSet("evaluate: empty test set");
    }
    const auto k = static_cast<std::size_t>(model.class_names.size());
    EvalReport report;
    report.n_test = test_idx.size();
    report.confusion.assign(k, std::vector<std::size_t>(k, 0));

    std::vector<std::vector<double>> probas;
    probas.reserve(test_idx.size());
    std::map<Country, std::vector<std::size_t>> by_country;  // into probas
    for (std::size_t pos = 0; pos < test_idx.size(); ++pos) {
        const std::size_t i = test_idx[pos];
        probas.push_back(predict_proba(model, data.rows[i]));
        by_country[data.countries[i]].push_back(pos);
        const auto& p = probas.back();
        std::size_t arg = 0;
        for (std::size_t c = 1; c < k; ++c) {
            if (p[c] > p[arg]) arg = c;
        }
        report.confusion[static_cast<std::size_t>(data.labels[i])][arg] += 1;
    }

    auto ovr_f1 = [&](std::span<const std::size_t> positions,
                      std::size_t cls) {
        BinaryCounts counts;
        for (std::size_t pos : positions) {
            const std::size_t i = test_idx[pos];
            const auto& p = probas[pos];
            std::size_t arg = 0;
            for (std::size_t c = 1; c < k; ++c) {
                if (p[c] > p[arg]) arg = c;
            }
            const bool truth =
                static_cast<std::size_t>(data.labels[i]) == cls;
            const bool pred = arg == cls;
            if (truth && pred) ++counts.tp;
            if (!truth && pred) ++counts.fp;
            if (truth && !pred) ++counts.fn;
        }
        return counts.f1();
    };

    std::vector<std::size_t> all_positions(test_idx.size());
    std::iota(all_positions.begin(), all_positions.end(), 0);
    for (std::size_t cls = 0; cls < k; ++cls) {
        report.f1[model.class_names[cls]] = ovr_f1(all_positions, cls);
    }
    for (const auto& [country, positions] : by_country) {
        for (std::size_t cls = 0; cls < k; ++cls) {
            report.f1_per_country[country][model.class_names[cls]] =
                ovr_f1(positions, cls);
        }
    }

    const auto importances = gain_importances(model);
    for (std::size_t f = 0; f < model.feature_names.size(); ++f) {
        report.importances[model.feature_names[f]] = importances[f];
    }

    // PR curves: pooled plus one per country present, per class with at
    // least one positive in the slice.
    auto add_curves = [&](std::optional<Country> country,
                          std::span<const std::size_t> positions) {
        for (std::size_t cls = 0; cls < k; ++cls) {
            std::vector<std::pair<double, bool>> scored;
            scored.reserve(positions.size());
            bool any_positive = false;
            for (std::size_t pos : positions) {
                const std::size_t i = test_idx[pos];
                const bool is_pos =
                    static_cast<std::size_t>(data.labels[i]) == cls;
                any_positive = any_positive || is_pos;
                scored.emplace_back(probas[pos][cls], is_pos);
            }
            if (!any_positive) continue;
            report.pr_curves.push_back(make_pr_curve(
                model.class_names[cls], country, std::move(scored)));
        }
    };
    add_curves(std::nullopt, all_positions);
    for (const auto& [country, positions] : by_country) {
        add_curves(country, positions);
    }
    return report;
}

double macro_f1(const EvalReport& report) {
    double total = 0.0;
    for (const auto& [name, f1] : report.f1) total += f1;
    return report.f1.empty() ? 0.0
                             : total / static_cast<double>(report.f1.size());
}

double majority_baseline_macro_f1(const Dataset& data,
                                  std::span<const std::size_t> train_idx,
                                  std::span<const std::size_t> test_idx) {
    const auto k = static_cast<std::size_t>(data.n_classes());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i : train_idx) {
        counts[static_cast<std::size_t>(data.labels[i])] += 1;
    }
    const std::size_t majority = static_cast<std::size_t>(std::distance(
        counts.begin(), std::max_element(counts.begin(), counts.end())));
    double total = 0.0;
    for (std::size_t cls = 0; cls < k; ++cls) {
        BinaryCounts c;
        for (std::size_t i : test_idx) {
            const bool truth = static_cast<std::size_t>(data.labels[i]) == cls;
            const bool pred = majority == cls;
            if (truth && pred) ++c.tp;
            if (!truth && pred) ++c.fp;
            if (truth && !pred) ++c.fn;
        }
        total += c.f1();
    }
    return total / static_cast<double>(k);
}

std::string model_to_json(const GbdtModel& model) {
    ordered_json j;
    j["format_version"] = 1;
    j["hyperparams"] = {{"n_trees", model.hp.n_trees},
                        {"max_depth", model.hp.max_depth},
                        {"learning_rate", model.hp.learning_rate},
                        {"min_leaf", model.hp.min_leaf}};
    j["seed"] = model.seed;
    j["feature_names"] = model.feature_names;
    j["class_names"] = model.class_names;
    j["base_score"] = model.base_score;
    ordered_json all_trees = ordered_json::array();
    for (const auto& class_trees : model.trees) {
        ordered_json jt = ordered_json::array();
        for (const Tree& tree : class_trees) {
            ordered_json nodes = ordered_json::array();
            for (const TreeNode& node : tree.nodes) {
                if (node.is_leaf()) {
                    nodes.push_back({{"v", node.value}});
                } else {
                    nodes.push_back({{"f", node.feature},
                                     {"t", node.threshold},
                                     {"l", node.left},
                                     {"r", node.right},
                                     {"g", node.gain}});
                }
            }
            jt.push_back({{"nodes", nodes}});
        }
        all_trees.push_back(jt);
    }
    j["trees"] = all_trees;
    return j.dump() + "\n";
}

GbdtModel model_from_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ModelError("model: not a JSON object");
    }
    try {
        if (j.at("format_version").get<int>() != 1) {
            throw ModelError("model: unsupported format_version");
        }
        GbdtModel model;
        const auto& hp = j.at("hyperparams");
        model.hp.n_trees = hp.at("n_trees").get<int>();
        model.hp.max_depth = hp.at("max_depth").get<int>();
        model.hp.learning_rate = hp.at("learning_rate").get<double>();
        model.hp.min_leaf = hp.at("min_leaf").get<int>();
        model.seed = j.at("seed").get<std::uint64_t>();
        model.feature_names =
            j.at("feature_names").get<std::vector<std::string>>();
        model.class_names =
            j.at("class_names").get<std::vector<std::string>>();
        model.base_score = j.at("base_score").get<std::vector<double>>();
        for (const auto& class_trees : j.at("trees")) {
            std::vector<Tree> trees;
            for (const auto& jt : class_trees) {
                Tree tree;
                for (const auto& jn : jt.at("nodes")) {
                    TreeNode node;
                    if (jn.contains("f")) {
                        node.feature = jn.at("f").get<int>();
                        node.threshold = jn.at("t").get<std::int64_t>();
                        node.left = jn.at("l").get<int>();
                        node.right = jn.at("r").get<int>();
                        node.gain = jn.at("g").get<double>();
                    } else {
                        node.value = jn.at("v").get<double>();
                    }
                    tree.nodes.push_back(node);
                }
                trees.push_back(std::move(tree));
            }
            model.trees.push_back(std::move(trees));
        }
        return model;
    } catch (const json::exception& e) {
        throw ModelError(std::string("model: ") + e.what());
    }
}

std::string eval_to_json(const EvalReport& report) {
    ordered_json j;
    j["n_test"] = report.n_test;
    ordered_json f1 = ordered_json::object();
    for (const auto& [name, value] : report.f1) f1[name] = value;
    j["f1"] = f1;
    j["macro_f1"] = macro_f1(report);
    j["confusion"] = report.confusion;
    ordered_json imp = ordered_json::object();
    for (const auto& [name, value] : report.importances) imp[name] = value;
    j["importances"] = imp;
    ordered_json per_country = ordered_json::object();
    for (const auto& [country, scores] : report.f1_per_country) {
        ordered_json cj = ordered_json::object();
        for (const auto& [name, value] : scores) cj[name] = value;
        per_country[std::string(to_string(country))] = cj;
    }
    j["f1_per_country"] = per_country;
    ordered_json curves = ordered_json::array();
    for (const auto& curve : report.pr_curves) {
        ordered_json cj;
        cj["class"] = curve.class_name;
        cj["country"] =
            curve.country ? std::string(to_string(*curve.country)) : "all";
        cj["prevalence"] = curve.prevalence;
        cj["n_points"] = curve.points.size();
        curves.push_back(cj);
    }
    j["pr_curves"] = curves;
    return j.dump(2) + "\n";
}

std::string pr_curve_to_csv(const PrCurve& curve) {
    std::ostringstream out;
    out << "threshold,precision,recall\n";
    for (const auto& pt : curve.points) {
        out << io::format_double(pt.threshold) << ','
            << io::format_double(pt.precision) << ','
            << io::format_double(pt.recall) << '\n';
    }
    return out.str();
}

}  // namespace repsig
