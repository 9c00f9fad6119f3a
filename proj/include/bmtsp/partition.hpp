#pragma once

// Phase 1: split the non-depot cities into k subsets whose sizes lie in
// [m_min, m_max]. Stage 1 seeds each subset with a random city and grows
// the subsets round-robin to m_min; stage 2 repeatedly hands the globally
// closest (unassigned city, open subset) pair to that subset.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bmtsp/model.hpp"

namespace bmtsp {

struct Partition {
    std::vector<std::vector<CityId>> subsets;  // cities in insertion order
    std::uint64_t rng_seed = 0;
    std::size_t stage1_steps = 0;  // absorptions while growing to m_min
    std::size_t stage2_steps = 0;  // assignments while augmenting

    friend bool operator==(const Partition&, const Partition&) = default;
};

/// The unassigned city closest to any member of `subset`, with that
/// distance. Ties go to the lowest city id. Throws ContractViolation when
/// either set is empty.
std::pair<CityId, double> nearest_unassigned(std::span<const CityId> subset,
                                             std::span<const CityId> unassigned,
                                             const Instance& inst);

/// Deterministic in (inst, seed). Ties: lowest city id, then lowest subset
/// index.
Partition partition(const Instance& inst, std::uint64_t seed);

}  // namespace bmtsp
