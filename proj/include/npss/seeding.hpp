#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace npss {

/// SplitMix64 finalizer. Used as the mixing function for every derived seed.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Child seed = stable hash of (parent seed, role string). Sub-results that
/// are seeded this way can be reproduced in isolation from the parent seed.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::string_view role) noexcept {
    return mix64(parent ^ mix64(fnv1a64(role)));
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::string_view role,
                                    std::uint64_t index) noexcept {
    return mix64(derive_seed(parent, role) ^ mix64(index + 1));
}

/// Uniform draw in [0, 1) that depends only on (seed, row, col), so cell values
/// do not depend on traversal order or thread count.
constexpr double cell_uniform(std::uint64_t seed, std::uint64_t row, std::uint64_t col) noexcept {
    const std::uint64_t h = mix64(mix64(seed ^ mix64(row)) ^ (col * 0xD1B54A32D192ED03ULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

using Rng = std::mt19937_64;

/// Unbiased integer in [0, n). The standard distributions are
/// implementation-defined, so sampling goes through this instead.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace npss
