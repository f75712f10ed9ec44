#pragma once

#include <cstdint>
#include <random>

namespace qboost {

// splitmix64; used to derive independent per-unit seeds so that parallel
// work (reads, trees, resamples) is reproducible regardless of scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 0x51ed2701));
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix_seed(mix_seed(seed, a), b);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

// deterministic coin for tie-breaking, keyed by (seed, index)
inline bool seeded_coin(std::uint64_t seed, std::uint64_t index) {
    return (splitmix64(seed ^ splitmix64(index)) & 1ULL) != 0;
}

} // namespace qboost
