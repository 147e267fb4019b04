#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace surveyscope {

// mt19937_64 output is bit-identical across platforms; std::shuffle and the
// std distributions are not, so the helpers below are hand-rolled.

inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    return bound == 0 ? 0 : rng() % bound;
}

/// Uniform double in [0, 1).
inline double uniform_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle_portable(std::vector<T>& items, std::mt19937_64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace surveyscope
