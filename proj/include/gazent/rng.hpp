#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace gazent {

/// splitmix64 step. Used for seed mixing and sub-stream derivation.
inline std::uint64_t splitmix64Next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Independent sub-stream seed for coordinates (a, b) under a base seed.
inline std::uint64_t deriveSeed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = base;
    std::uint64_t z = splitmix64Next(s);
    s ^= (a + 1) * 0xD1B54A32D192ED03ull;
    z ^= splitmix64Next(s);
    s ^= (b + 1) * 0x8CB92BA72F3D8DD7ull;
    z ^= splitmix64Next(s);
    return z;
}

// The distributions below are hand-rolled on top of the (fully specified)
// mt19937_64 stream, because the std::*_distribution adaptors are not
// guaranteed to produce the same values across standard libraries.

/// Uniform in [0, 1) with 53-bit resolution.
inline double uniformDouble(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Unbiased uniform integer in [0, n).
inline std::uint64_t uniformIndex(std::mt19937_64& gen, std::uint64_t n) {
    const std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t x = gen();
    while (x >= limit) x = gen();
    return x % n;
}

/// Standard normal via Box-Muller (two uniforms per draw).
inline double gaussian(std::mt19937_64& gen) {
    const double u1 = uniformDouble(gen);
    const double u2 = uniformDouble(gen);
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(6.28318530717958647692528676655900577 * u2);
}

inline double logNormal(std::mt19937_64& gen, double median, double sigma_log) {
    return std::exp(std::log(median) + sigma_log * gaussian(gen));
}

/// k distinct indices from [0, n), returned ascending (partial Fisher-Yates).
inline std::vector<int> sampleWithoutReplacement(int n, int k, std::mt19937_64& gen) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < k; ++i) {
        const auto j = static_cast<int>(
            uniformIndex(gen, static_cast<std::uint64_t>(n - i))) + i;
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
}

} // namespace gazent
