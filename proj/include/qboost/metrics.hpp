#pragma once

#include <cstdint>
#include <vector>

namespace qboost {

// Mann-Whitney AUC with average-rank tie correction; equals the trapezoidal
// ROC area. Labels are -1/+1 and both classes must be present.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct FoldPlan {
    int k = 0;
    std::vector<int> assignments; // row -> fold index, sizes balanced within 1
    std::uint64_t seed = 0;

    std::vector<std::size_t> fold_rows(int fold) const;
    std::vector<std::size_t> complement_rows(int fold) const;
};

FoldPlan kfold(std::size_t n, int k, std::uint64_t seed);

struct ConfusionMatrix {
    std::int64_t tp = 0, fn = 0, fp = 0, tn = 0;

    std::int64_t total() const { return tp + fn + fp + tn; }
    double accuracy() const;
};

ConfusionMatrix confusion(const std::vector<int>& pred, const std::vector<int>& truth);

struct Summary {
    double min = 0, q1 = 0, median = 0, mean = 0, q3 = 0, max = 0, std_dev = 0;
};

// Quartiles by linear interpolation between order statistics; sample standard
// deviation (n-1 denominator).
Summary summarize(const std::vector<double>& values);

} // namespace qboost
