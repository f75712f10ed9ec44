#pragma once

#include <cstdint>
#include <vector>

namespace qboost {

struct TreeNode {
    int feature = -1; // -1: leaf
    double threshold = 0.0;
    int left = -1, right = -1; // goes left when x[feature] <= threshold
    double pos_fraction = 0.0;
    int count = 0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes; // node 0 is the root

    double predict_proba(const std::vector<double>& row) const;
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    int trees_count = 0;
    int max_depth = -1; // -1: unlimited
    int features_per_split = 0;
    std::uint64_t seed = 0;
};

// Bootstrap-per-tree CART with Gini splits over a random feature subset per
// node (floor(sqrt(p)) when features_per_split == 0). Deterministic given
// seed and independent of thread count.
ForestModel forest_fit(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                       int trees_count = 500, int max_depth = -1, int features_per_split = 0,
                       std::uint64_t seed = 0);

// Mean over trees of the leaf positive-class fraction.
double forest_predict_proba(const ForestModel& model, const std::vector<double>& row);

namespace serial {
ForestModel forest_fit(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                       int trees_count = 500, int max_depth = -1, int features_per_split = 0,
                       std::uint64_t seed = 0);
} // namespace serial

} // namespace qboost
