#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qboost/metrics.hpp"

using namespace qboost;

namespace {
// O(n^2) all-pairs counting oracle with half credit for ties
double auc_pairwise(const std::vector<double>& scores, const std::vector<int>& labels) {
    double concordant = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[i] != 1 || labels[j] != -1) continue;
            ++pairs;
            if (scores[i] > scores[j]) concordant += 1.0;
            else if (scores[i] == scores[j]) concordant += 0.5;
        }
    return concordant / static_cast<double>(pairs);
}
} // namespace

TEST_CASE("perfectly separated scores give AUC 1") {
    CHECK(auc({0.1, 0.2, 0.8, 0.9}, {-1, -1, 1, 1}) == doctest::Approx(1.0));
}

TEST_CASE("constant scores give AUC 0.5") {
    CHECK(auc({0.3, 0.3, 0.3, 0.3}, {-1, 1, -1, 1}) == doctest::Approx(0.5));
}

TEST_CASE("worked example: 3 of 4 pairs concordant") {
    CHECK(auc({0.1, 0.4, 0.35, 0.8}, {-1, -1, 1, 1}) == doctest::Approx(0.75));
}

TEST_CASE("single-class labels are an undefined metric") {
    CHECK_THROWS_AS(auc({0.1, 0.2}, {1, 1}), std::domain_error);
}

TEST_CASE("rank AUC equals the pairwise oracle on random inputs with ties") {
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 50 + static_cast<std::size_t>(eng() % 500);
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            // quantized scores force plenty of ties
            scores[i] = std::floor(unif(eng) * 20.0) / 20.0;
            labels[i] = unif(eng) < 0.4 ? 1 : -1;
        }
        labels[0] = 1;
        labels[1] = -1;
        CHECK(auc(scores, labels) == doctest::Approx(auc_pairwise(scores, labels)).epsilon(1e-12));
    }
}

TEST_CASE("score negation flips AUC") {
    std::mt19937_64 eng(6);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> scores(200), negated(200);
    std::vector<int> labels(200);
    for (std::size_t i = 0; i < 200; ++i) {
        scores[i] = unif(eng);
        negated[i] = -scores[i];
        labels[i] = i % 3 == 0 ? 1 : -1;
    }
    CHECK(auc(scores, labels) == doctest::Approx(1.0 - auc(negated, labels)).epsilon(1e-12));
}

TEST_CASE("kfold balances sizes and partitions rows") {
    const FoldPlan plan = kfold(10, 3, 1);
    std::vector<int> sizes(3, 0);
    for (int f : plan.assignments) sizes[static_cast<std::size_t>(f)]++;
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<int>{3, 3, 4});

    const FoldPlan unit = kfold(10, 10, 2);
    std::vector<int> unit_sizes(10, 0);
    for (int f : unit.assignments) unit_sizes[static_cast<std::size_t>(f)]++;
    for (int s : unit_sizes) CHECK(s == 1);

    CHECK(kfold(100, 7, 9).assignments == kfold(100, 7, 9).assignments);
    CHECK_THROWS_AS(kfold(3, 4, 0), std::invalid_argument);
}

TEST_CASE("fold rows and complement partition exactly") {
    const FoldPlan plan = kfold(23, 4, 3);
    for (int f = 0; f < 4; ++f) {
        const auto test = plan.fold_rows(f);
        const auto train = plan.complement_rows(f);
        CHECK(test.size() + train.size() == 23);
    }
}

TEST_CASE("confusion counts with +1 as positive") {
    CHECK(confusion({1, 1, -1, -1}, {1, 1, -1, -1}).fp == 0);
    CHECK(confusion({-1, -1, 1, 1}, {1, 1, -1, -1}).tp == 0);
    const ConfusionMatrix m = confusion({1, -1, 1, -1}, {1, 1, -1, -1});
    CHECK(m.tp == 1);
    CHECK(m.fn == 1);
    CHECK(m.fp == 1);
    CHECK(m.tn == 1);
    CHECK_THROWS_AS(confusion({1}, {1, -1}), std::invalid_argument);
}

TEST_CASE("summary statistics") {
    const Summary c = summarize({2.5, 2.5, 2.5});
    CHECK(c.std_dev == 0.0);
    CHECK(c.min == c.max);
    CHECK(c.median == 2.5);

    const Summary s = summarize({1, 2, 3, 4});
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.median == doctest::Approx(2.5));

    const Summary q = summarize({5, 1, 3, 2, 4});
    CHECK(q.q1 == doctest::Approx(2.0));
    CHECK(q.q3 == doctest::Approx(4.0));

    CHECK_THROWS_AS(summarize({}), std::invalid_argument);
}
