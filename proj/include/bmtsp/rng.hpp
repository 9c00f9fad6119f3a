#pragma once

// Portable random streams. std::mt19937_64 is fully specified by the
// standard, so its raw output is identical on every platform. The standard
// distributions are not, which is why bounded draws and shuffles live here.

#include <cstdint>
#include <random>
#include <span>

namespace bmtsp {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of restart `index` derived from a run seed:
/// splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Uniform integer in [0, bound) by rejection sampling; bound must be > 0.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Moves a uniformly chosen `count`-element sample to the front of `values`
/// (the first `count` steps of a Fisher-Yates shuffle).
void partial_shuffle(std::span<int> values, std::size_t count, Rng& rng);

}  // namespace bmtsp
