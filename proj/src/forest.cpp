#include "qboost/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "qboost/rng.hpp"

namespace qboost {

namespace {

struct TreeBuilder {
    const std::vector<std::vector<double>>& X;
    const std::vector<int>& y;
    int max_depth;
    std::size_t mtry;
    std::mt19937_64 eng;
    DecisionTree tree;
    std::vector<int> feature_pool;

    TreeBuilder(const std::vector<std::vector<double>>& X_, const std::vector<int>& y_,
                int max_depth_, std::size_t mtry_, std::uint64_t seed)
        : X(X_), y(y_), max_depth(max_depth_), mtry(mtry_), eng(make_engine(seed)) {
        feature_pool.resize(X.front().size());
        std::iota(feature_pool.begin(), feature_pool.end(), 0);
    }

    static double gini(std::size_t pos, std::size_t total) {
        if (total == 0) return 0.0;
        const double p = static_cast<double>(pos) / static_cast<double>(total);
        return 2.0 * p * (1.0 - p);
    }

    int build(std::vector<std::size_t>& rows, int depth) {
        const int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        std::size_t pos = 0;
        for (std::size_t r : rows) pos += y[r] == 1;
        tree.nodes[node_id].count = static_cast<int>(rows.size());
        tree.nodes[node_id].pos_fraction = rows.empty()
                                               ? 0.0
                                               : static_cast<double>(pos) / static_cast<double>(rows.size());
        if (pos == 0 || pos == rows.size() || rows.size() < 2 ||
            (max_depth >= 0 && depth >= max_depth))
            return node_id;

        // random feature subset for this node
        for (std::size_t i = 0; i < mtry; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, feature_pool.size() - 1);
            std::swap(feature_pool[i], feature_pool[pick(eng)]);
        }

        const double parent_impurity = gini(pos, rows.size());
        int best_feature = -1;
        double best_threshold = 0.0, best_gain = 1e-12;
        std::vector<std::pair<double, int>> vals(rows.size());

        for (std::size_t fi = 0; fi < mtry; ++fi) {
            const int f = feature_pool[fi];
            for (std::size_t i = 0; i < rows.size(); ++i)
                vals[i] = {X[rows[i]][static_cast<std::size_t>(f)], y[rows[i]]};
            std::sort(vals.begin(), vals.end());
            std::size_t left_n = 0, left_pos = 0;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                ++left_n;
                left_pos += vals[i].second == 1;
                if (vals[i].first == vals[i + 1].first) continue;
                const std::size_t right_n = vals.size() - left_n;
                const std::size_t right_pos = pos - left_pos;
                const double wl = static_cast<double>(left_n) / static_cast<double>(vals.size());
                const double gain = parent_impurity - wl * gini(left_pos, left_n) -
                                    (1.0 - wl) * gini(right_pos, right_n);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = f;
                    best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
                }
            }
        }
        if (best_feature < 0) return node_id;

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows)
            (X[r][static_cast<std::size_t>(best_feature)] <= best_threshold ? left_rows : right_rows)
                .push_back(r);
        if (left_rows.empty() || right_rows.empty()) return node_id;

        rows.clear();
        rows.shrink_to_fit();
        const int left = build(left_rows, depth + 1);
        const int right = build(right_rows, depth + 1);
        tree.nodes[node_id].feature = best_feature;
        tree.nodes[node_id].threshold = best_threshold;
        tree.nodes[node_id].left = left;
        tree.nodes[node_id].right = right;
        return node_id;
    }
};

DecisionTree build_tree(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                        int max_depth, std::size_t mtry, std::uint64_t seed) {
    TreeBuilder builder(X, y, max_depth, mtry, seed);
    // bootstrap sample
    std::vector<std::size_t> rows(X.size());
    std::uniform_int_distribution<std::size_t> pick(0, X.size() - 1);
    for (auto& r : rows) r = pick(builder.eng);
    builder.build(rows, 0);
    return std::move(builder.tree);
}

ForestModel forest_fit_impl(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                            int trees_count, int max_depth, int features_per_split,
                            std::uint64_t seed, bool parallel) {
    if (X.empty() || X.size() != y.size())
        throw std::invalid_argument("forest_fit: empty data or size mismatch");
    for (int label : y)
        if (label != 1 && label != -1) throw std::invalid_argument("labels must be -1 or +1");
    if (trees_count < 1) throw std::invalid_argument("trees_count must be >= 1");
    const std::size_t p = X.front().size();
    if (p == 0) throw std::invalid_argument("forest_fit: no features");

    ForestModel model;
    model.trees_count = trees_count;
    model.max_depth = max_depth;
    model.features_per_split =
        features_per_split > 0 ? features_per_split
                               : std::max(1, static_cast<int>(std::floor(std::sqrt(p))));
    model.seed = seed;
    model.trees.resize(trees_count);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::int64_t t = 0; t < trees_count; ++t)
        model.trees[t] = build_tree(X, y, max_depth,
                                    static_cast<std::size_t>(model.features_per_split),
                                    mix_seed(seed, static_cast<std::uint64_t>(t)));
    return model;
}

} // namespace

double DecisionTree::predict_proba(const std::vector<double>& row) const {
    int node = 0;
    while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const auto& nd = nodes[static_cast<std::size_t>(node)];
        node = row[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes[static_cast<std::size_t>(node)].pos_fraction;
}

ForestModel forest_fit(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                       int trees_count, int max_depth, int features_per_split, std::uint64_t seed) {
    return forest_fit_impl(X, y, trees_count, max_depth, features_per_split, seed, true);
}

namespace serial {
ForestModel forest_fit(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                       int trees_count, int max_depth, int features_per_split, std::uint64_t seed) {
    return forest_fit_impl(X, y, trees_count, max_depth, features_per_split, seed, false);
}
} // namespace serial

double forest_predict_proba(const ForestModel& model, const std::vector<double>& row) {
    if (model.trees.empty()) throw std::runtime_error("empty forest");
    double acc = 0.0;
    for (const auto& tree : model.trees) acc += tree.predict_proba(row);
    return acc / static_cast<double>(model.trees.size());
}

} // namespace qboost
