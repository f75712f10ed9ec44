#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace qboost {

// Rules all output -1/+1 on every row.
struct ThresholdStump {
    int feature_index = 0;
    double threshold = 0.0;
    int polarity = 1; // +1: x > threshold votes +1; -1: flipped
};

struct SuffixLetter {
    char letter = 'a';
    int class_if_match = 1; // sign emitted when the final letter matches
};

struct RawColumn {
    int column_index = 0;
    int polarity = 1;
};

struct WeakClassifier {
    std::variant<ThresholdStump, SuffixLetter, RawColumn> rule;
    std::string id;
};

enum class TiePolicy { fixed_positive, seeded_coin };

// Ordered list of accepted members; votes are combined by sign of the sum.
struct StrongClassifier {
    std::vector<WeakClassifier> members;
    TiePolicy tie_policy = TiePolicy::fixed_positive;
    std::uint64_t tie_seed = 0;
};

} // namespace qboost
