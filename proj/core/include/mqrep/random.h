#pragma once

#include <cstdint>
#include <random>

namespace mqrep {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed of run `run` in batch `batch`. Stable across releases: output files
// depend on it.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t batch, std::uint64_t run) {
    return splitmix64(splitmix64(splitmix64(master) ^ batch) ^ run);
}

// 53-bit uniform in [0, 1). Written out instead of using
// std::generate_canonical so that the stream is the same on every standard
// library.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return uniform01(rng) < p;
}

// Uniform integer in [0, n), n > 0, by rejection (no modulo bias).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

}  // namespace mqrep
