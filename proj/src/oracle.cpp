#include "bmtsp/oracle.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <string>

namespace bmtsp {

namespace {

constexpr double kTieTolerance = 1e-9;

double path_cost(const std::vector<CityId>& seq, const Instance& inst) {
    double cost = 0.0;
    CityId prev = kDepot;
    for (CityId c : seq) {
        cost += inst.distance(prev, c);
        prev = c;
    }
    return cost + inst.distance(prev, kDepot);
}

// Calls `visit` for each ordering of `cities` whose first element is below
// its last (one direction per cycle), in lexicographic order.
void for_each_canonical_order(std::vector<CityId> cities,
                              const std::function<void(const std::vector<CityId>&)>& visit) {
    std::sort(cities.begin(), cities.end());
    do {
        if (cities.size() < 2 || cities.front() < cities.back()) visit(cities);
    } while (std::next_permutation(cities.begin(), cities.end()));
}

// Restricted growth strings: block[c] for customer index c, blocks numbered
// by first appearance so each partition is produced once.
void for_each_partition(int n, int k, int lo, int hi,
                        const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<int> block(static_cast<std::size_t>(n), 0);
    std::vector<int> size(static_cast<std::size_t>(k), 0);
    std::function<void(int, int)> rec = [&](int idx, int used) {
        const int remaining = n - idx;
        // Every block must still be able to reach the lower bound.
        int deficit = 0;
        for (int b = 0; b < used; ++b) deficit += std::max(0, lo - size[static_cast<std::size_t>(b)]);
        deficit += (k - used) * lo;
        if (deficit > remaining) return;
        if (idx == n) {
            if (used == k) visit(block);
            return;
        }
        for (int b = 0; b < std::min(used + 1, k); ++b) {
            if (size[static_cast<std::size_t>(b)] == hi) continue;
            block[static_cast<std::size_t>(idx)] = b;
            ++size[static_cast<std::size_t>(b)];
            rec(idx + 1, std::max(used, b + 1));
            --size[static_cast<std::size_t>(b)];
        }
    };
    rec(0, 0);
}

std::vector<std::vector<CityId>> blocks_of(const std::vector<int>& block, int k,
                                           const std::vector<CityId>& customers) {
    std::vector<std::vector<CityId>> blocks(static_cast<std::size_t>(k));
    for (std::size_t c = 0; c < block.size(); ++c) {
        blocks[static_cast<std::size_t>(block[c])].push_back(customers[c]);
    }
    return blocks;
}

std::vector<CityId> flatten(const Solution& s) {
    std::vector<CityId> out;
    for (const Tour& t : s.tours) {
        out.insert(out.end(), t.cities.begin(), t.cities.end());
        out.push_back(kDepot);
    }
    return out;
}

void check_guard(const Instance& inst, int max_customers) {
    if (inst.customer_count() > max_customers || inst.salesmen() > kMaxExactSalesmen) {
        throw OracleRefused("exhaustive search is limited to " + std::to_string(max_customers) +
                            " customers and " + std::to_string(kMaxExactSalesmen) + " salesmen; got " +
                            std::to_string(inst.customer_count()) + " and " +
                            std::to_string(inst.salesmen()));
    }
    check_feasible(inst.customer_count(), inst.salesmen(), inst.min_cities(), inst.max_cities());
}

}  // namespace

Tour best_tour_exact(std::vector<CityId> cities, const Instance& inst) {
    if (static_cast<int>(cities.size()) > kMaxExactCustomers) {
        throw OracleRefused("exhaustive tour search is limited to " + std::to_string(kMaxExactCustomers) +
                            " cities");
    }
    Tour best;
    double best_cost = 0.0;
    bool found = false;
    for_each_canonical_order(std::move(cities), [&](const std::vector<CityId>& seq) {
        const double cost = path_cost(seq, inst);
        // Orders arrive lexicographically, so only a strictly cheaper one replaces.
        if (!found || cost < best_cost - kTieTolerance) {
            best.cities = seq;
            best_cost = cost;
            found = true;
        }
    });
    return best;
}

ExactResult solve_exact(const Instance& inst) {
    check_guard(inst, kMaxExactCustomers);
    const std::vector<CityId> customers = inst.customers();
    const int n = static_cast<int>(customers.size());

    // Best tour per customer subset, keyed by bitmask over `customers`.
    std::vector<std::optional<Tour>> memo(std::size_t{1} << n);
    auto tour_for = [&](const std::vector<CityId>& block) -> const Tour& {
        std::size_t mask = 0;
        for (CityId c : block) {
            const auto pos = std::lower_bound(customers.begin(), customers.end(), c) - customers.begin();
            mask |= std::size_t{1} << pos;
        }
        if (!memo[mask]) memo[mask] = best_tour_exact(block, inst);
        return *memo[mask];
    };

    ExactResult best;
    std::vector<CityId> best_key;
    bool found = false;
    for_each_partition(n, inst.salesmen(), inst.min_cities(), inst.max_cities(), [&](const std::vector<int>& block) {
        Solution candidate;
        for (const auto& members : blocks_of(block, inst.salesmen(), customers)) {
            candidate.tours.push_back(tour_for(members));
        }
        refresh_cost(candidate, inst);
        const double cost = candidate.total_cost;
        if (found && cost > best.cost + kTieTolerance) return;
        auto key = flatten(candidate);
        if (!found || cost < best.cost - kTieTolerance || key < best_key) {
            best.solution = std::move(candidate);
            best.cost = cost;
            best_key = std::move(key);
            found = true;
        }
    });
    return best;
}

std::vector<Solution> enumerate_solutions(const Instance& inst) {
    check_guard(inst, kMaxEnumeratedCustomers);
    const std::vector<CityId> customers = inst.customers();
    std::vector<Solution> out;
    for_each_partition(static_cast<int>(customers.size()), inst.salesmen(), inst.min_cities(), inst.max_cities(),
                       [&](const std::vector<int>& block) {
                           const auto blocks = blocks_of(block, inst.salesmen(), customers);
                           std::vector<std::vector<std::vector<CityId>>> orders(blocks.size());
                           for (std::size_t b = 0; b < blocks.size(); ++b) {
                               for_each_canonical_order(blocks[b], [&](const std::vector<CityId>& seq) {
                                   orders[b].push_back(seq);
                               });
                           }
                           // Cartesian product of per-block orderings.
                           std::vector<std::size_t> pick(blocks.size(), 0);
                           while (true) {
                               Solution s;
                               for (std::size_t b = 0; b < blocks.size(); ++b) {
                                   s.tours.push_back(Tour{orders[b][pick[b]]});
                               }
                               refresh_cost(s, inst);
                               out.push_back(std::move(s));
                               std::size_t b = 0;
                               while (b < pick.size() && ++pick[b] == orders[b].size()) pick[b++] = 0;
                               if (b == pick.size()) break;
                           }
                       });
    return out;
}

}  // namespace bmtsp
