#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace gic {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a child seed from a base seed and a path of integer tags, e.g.
/// derive_seed(plan_seed, {row, method, budget_index}).
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t s = mix_seed(base);
    for (auto t : tags) s = mix_seed(s ^ mix_seed(t + 0x632be59bd9b4e019ULL));
    return s;
}

/// Uniform index in [0, n).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform_unit(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

} // namespace gic
