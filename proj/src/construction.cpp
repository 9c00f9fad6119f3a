#include "bmtsp/construction.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace bmtsp {

Tour CheapestInsertion::build(std::span<const CityId> vertices, const Instance& inst) const {
    const CityId depot = inst.depot();
    const std::size_t m = vertices.size();

    // Local indices: 0 is the depot, 1..m the vertices.
    std::vector<CityId> ids(m + 1);
    ids[0] = depot;
    std::copy(vertices.begin(), vertices.end(), ids.begin() + 1);
    auto dist = [&](std::size_t a, std::size_t b) { return inst.distance(ids[a], ids[b]); };

    std::size_t first = 1;
    for (std::size_t v = 2; v <= m; ++v) {
        const double dv = dist(0, v);
        const double df = dist(0, first);
        if (dv > df || (dv == df && ids[v] < ids[first])) first = v;
    }

    // Cycle as a successor array; the edge a -> succ[a] is named by its tail a.
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> succ(m + 1, kNone);
    succ[0] = first;
    succ[first] = 0;

    std::vector<std::size_t> open;
    for (std::size_t v = 1; v <= m; ++v) {
        if (v != first) open.push_back(v);
    }
    std::vector<double> best_cost(m + 1, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> best_tail(m + 1, kNone);

    auto rescan = [&](std::size_t v) {
        best_cost[v] = std::numeric_limits<double>::infinity();
        std::size_t a = 0;
        do {
            const std::size_t b = succ[a];
            const double c = dist(a, v) + dist(v, b) - dist(a, b);
            if (c < best_cost[v]) {
                best_cost[v] = c;
                best_tail[v] = a;
            }
            a = b;
        } while (a != 0);
    };
    for (std::size_t v : open) rescan(v);

    while (!open.empty()) {
        std::size_t pick = 0;
        for (std::size_t i = 1; i < open.size(); ++i) {
            const std::size_t v = open[i];
            const std::size_t w = open[pick];
            if (best_cost[v] < best_cost[w] || (best_cost[v] == best_cost[w] && ids[v] < ids[w])) {
                pick = i;
            }
        }
        const std::size_t v = open[pick];
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));

        const std::size_t a = best_tail[v];
        const std::size_t b = succ[a];
        succ[a] = v;
        succ[v] = b;

        for (std::size_t u : open) {
            if (best_tail[u] == a) {
                rescan(u);
                continue;
            }
            const double via_av = dist(a, u) + dist(u, v) - dist(a, v);
            if (via_av < best_cost[u]) {
                best_cost[u] = via_av;
                best_tail[u] = a;
            }
            const double via_vb = dist(v, u) + dist(u, b) - dist(v, b);
            if (via_vb < best_cost[u]) {
                best_cost[u] = via_vb;
                best_tail[u] = v;
            }
        }
    }

    Tour tour;
    tour.cities.reserve(m);
    for (std::size_t a = succ[0]; a != 0; a = succ[a]) tour.cities.push_back(ids[a]);
    return tour;
}

std::unique_ptr<ConstructionStrategy> make_construction_strategy(std::string_view name) {
    if (name == "cheapest-insertion") return std::make_unique<CheapestInsertion>();
    throw std::invalid_argument("unknown construction strategy '" + std::string(name) + "'");
}

Tour construct_tour(std::span<const CityId> vertices, const Instance& inst,
                    const ConstructionStrategy& strategy) {
    if (vertices.empty()) throw ContractViolation("construct_tour: empty vertex set");
    for (CityId id : vertices) {
        if (!inst.contains(id)) throw InvalidReference(id);
        if (id == inst.depot()) throw ContractViolation("construct_tour: depot in vertex set");
    }
    return strategy.build(vertices, inst);
}

Tour two_opt(Tour tour, const Instance& inst) {
    const std::size_t m = tour.cities.size();
    if (m < 3) return tour;  // a cycle on <= 3 nodes has no 2-exchange

    // seq[0] is the depot; reversals never include index 0, so it stays put.
    std::vector<CityId> seq(m + 1);
    seq[0] = inst.depot();
    std::copy(tour.cities.begin(), tour.cities.end(), seq.begin() + 1);
    const std::size_t len = seq.size();

    for (;;) {
        double best_delta = -kImprovementEpsilon;
        std::size_t best_i = 0;
        std::size_t best_j = 0;
        for (std::size_t i = 0; i + 2 < len; ++i) {
            const CityId a = seq[i];
            const CityId b = seq[i + 1];
            const double ab = inst.distance(a, b);
            // edges (i,i+1) and (j,j+1) must not share a node
            const std::size_t j_end = (i == 0) ? len - 1 : len;
            for (std::size_t j = i + 2; j < j_end; ++j) {
                const CityId c = seq[j];
                const CityId d = seq[(j + 1) % len];
                const double delta = inst.distance(a, c) + inst.distance(b, d) - ab - inst.distance(c, d);
                if (delta < best_delta) {
                    best_delta = delta;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        if (best_j == 0) break;
        std::reverse(seq.begin() + static_cast<std::ptrdiff_t>(best_i + 1),
                     seq.begin() + static_cast<std::ptrdiff_t>(best_j + 1));
    }
    std::copy(seq.begin() + 1, seq.end(), tour.cities.begin());
    return tour;
}

Solution construct_solution(const Partition& p, const Instance& inst,
                            const ConstructionStrategy& strategy) {
    Solution s;
    s.tours.reserve(p.subsets.size());
    for (const auto& subset : p.subsets) s.tours.push_back(construct_tour(subset, inst, strategy));
    refresh_cost(s, inst);
    return s;
}

}  // namespace bmtsp
