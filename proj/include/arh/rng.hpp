// Reproducible randomness: the SplitMix64 engine and the per-replication seed
// derivation used by the benchmark harness. Streams depend only on the seed,
// never on thread scheduling.
#pragma once

#include <cstdint>

namespace arh {

/// SplitMix64 finalizer (the mixing function of the SplittableRandom family).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// SplitMix64: a 64-bit counter-based generator (Steele, Lea and Flood).
/// Satisfies UniformRandomBitGenerator, so standard distributions apply.
struct SplitMix64 {
    using result_type = std::uint64_t;
    std::uint64_t state;

    explicit constexpr SplitMix64(std::uint64_t seed) : state(seed) {}
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~0ULL; }
    constexpr result_type operator()() { return mix64(state += 0x9E3779B97F4A7C15ULL); }
};

inline constexpr char kRngAlgorithm[] = "SplitMix64 + std::normal_distribution";

/// Stream seed for replication `rep` at sample size `n`:
/// seed_base + mix64(n * gamma ^ mix64(rep + offset)), gamma the SplitMix64
/// increment. Collision-free in practice and independent of worker count.
constexpr std::uint64_t derive_seed(std::uint64_t seed_base, std::uint64_t n, std::uint64_t rep) {
    return seed_base + mix64(n * 0x9E3779B97F4A7C15ULL ^ mix64(rep + 0x632BE59BD9B4E019ULL));
}

inline constexpr char kSeedFormula[] =
    "seed_base + mix64(n * 0x9E3779B97F4A7C15 ^ mix64(rep + 0x632BE59BD9B4E019))";

}  // namespace arh
