#include "bmtsp/partition.hpp"

#include <algorithm>
#include <limits>

#include "bmtsp/rng.hpp"

namespace bmtsp {

std::pair<CityId, double> nearest_unassigned(std::span<const CityId> subset,
                                             std::span<const CityId> unassigned,
                                             const Instance& inst) {
    if (subset.empty() || unassigned.empty()) {
        throw ContractViolation("nearest_unassigned: subset and candidates must be non-empty");
    }
    CityId best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (CityId candidate : unassigned) {
        double d = std::numeric_limits<double>::infinity();
        for (CityId member : subset) d = std::min(d, inst.distance(candidate, member));
        if (d < best_distance || (d == best_distance && candidate < best)) {
            best = candidate;
            best_distance = d;
        }
    }
    return {best, best_distance};
}

Partition partition(const Instance& inst, std::uint64_t seed) {
    // Instance construction already guarantees k*m_min <= n <= k*m_max; the
    // recheck keeps the error independent of the seed.
    check_feasible(inst.customer_count(), inst.salesmen(), inst.min_cities(), inst.max_cities());

    const auto k = static_cast<std::size_t>(inst.salesmen());
    const auto m_min = static_cast<std::size_t>(inst.min_cities());
    const auto m_max = static_cast<std::size_t>(inst.max_cities());

    Partition result;
    result.rng_seed = seed;
    result.subsets.resize(k);

    std::vector<CityId> pool = inst.customers();
    Rng rng(seed);
    partial_shuffle(pool, k, rng);

    std::vector<CityId> unassigned(pool.begin() + static_cast<std::ptrdiff_t>(k), pool.end());
    std::sort(unassigned.begin(), unassigned.end());
    auto take = [&unassigned](CityId id) {
        unassigned.erase(std::lower_bound(unassigned.begin(), unassigned.end(), id));
    };

    for (std::size_t j = 0; j < k; ++j) result.subsets[j].push_back(pool[j]);

    // Stage 1
    for (std::size_t round = 2; round <= m_min; ++round) {
        for (std::size_t j = 0; j < k; ++j) {
            const CityId c = nearest_unassigned(result.subsets[j], unassigned, inst).first;
            result.subsets[j].push_back(c);
            take(c);
            ++result.stage1_steps;
        }
    }

    // Stage 2
    while (!unassigned.empty()) {
        CityId best_city = 0;
        std::size_t best_subset = k;
        double best_distance = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k; ++j) {
            if (result.subsets[j].size() >= m_max) continue;
            const auto [c, d] = nearest_unassigned(result.subsets[j], unassigned, inst);
            if (d < best_distance || (d == best_distance && c < best_city)) {
                best_city = c;
                best_subset = j;
                best_distance = d;
            }
        }
        if (best_subset == k) throw ContractViolation("partition: every subset is full");
        result.subsets[best_subset].push_back(best_city);
        take(best_city);
        ++result.stage2_steps;
    }
    return result;
}

}  // namespace bmtsp
