#pragma once

// Seeded randomness helpers. All draws go through these functions instead of
// <random> distributions, whose output is implementation-defined; this keeps
// seeded runs bit-identical across standard libraries and platforms.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <vector>

namespace hsgfs {

using Rng = std::mt19937_64;

// Uniform double in [0, 1), 53 mantissa bits.
inline double next_unit(Rng& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform index in {0, ..., n-1}, unbiased via rejection.
inline std::size_t next_index(Rng& g, std::size_t n) {
    const std::uint64_t span = static_cast<std::uint64_t>(n);
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x = g();
    while (x >= limit) x = g();
    return static_cast<std::size_t>(x % span);
}

// Uniform integer in {lo, ..., hi}, inclusive.
inline std::size_t next_int(Rng& g, std::size_t lo, std::size_t hi) {
    return lo + next_index(g, hi - lo + 1);
}

// Standard normal via Box-Muller (cosine branch only).
inline double next_gaussian(Rng& g) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double u1 = 1.0 - next_unit(g);  // (0, 1], keeps log finite
    const double u2 = next_unit(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

// In-place Fisher-Yates shuffle driven by next_index.
template <typename T>
inline void shuffle(std::vector<T>& v, Rng& g) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = next_index(g, i);
        std::swap(v[i - 1], v[j]);
    }
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Child-seed derivation: one master seed spawns an independent stream per
// (stream name, index) pair. Adding a new stream never perturbs existing
// ones because each child depends only on its own (name, index).
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stream,
                                 std::uint64_t index) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a over the stream name
    for (const char c : stream) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return splitmix64(splitmix64(master ^ h) + index);
}

}  // namespace hsgfs
