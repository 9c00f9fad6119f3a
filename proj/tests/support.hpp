#pragma once

// Shared helpers for the unit and acceptance tests. Everything that serves
// as an expected value here is computed independently of the library code
// under test (direct coordinate arithmetic, naive enumeration).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "bmtsp/model.hpp"
#include "bmtsp/rng.hpp"

namespace support {

using namespace bmtsp;

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(BMTSP_FIXTURE_DIR) / name;
}

inline std::filesystem::path repo_path(const std::string& rel) {
    return std::filesystem::path(BMTSP_SOURCE_DIR) / rel;
}

/// points[0] is the depot.
inline Instance make_instance(const std::vector<std::pair<double, double>>& points, int k, int lo, int hi,
                              const std::string& name = "test",
                              DistanceConvention convention = DistanceConvention::exact) {
    std::vector<City> cities;
    for (std::size_t i = 0; i < points.size(); ++i) {
        cities.push_back({static_cast<CityId>(i + 1), points[i].first, points[i].second});
    }
    return Instance(name, std::move(cities), k, lo, hi, convention);
}

/// n customers plus a depot, integer coordinates in [0, side).
inline Instance random_instance(std::uint64_t seed, int n, int k, int lo, int hi, int side = 1000,
                                const std::string& name = "rand") {
    Rng rng(seed);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i <= n; ++i) {
        pts.emplace_back(static_cast<double>(uniform_below(rng, side)), static_cast<double>(uniform_below(rng, side)));
    }
    return make_instance(pts, k, lo, hi, name);
}

/// Independent distance: straight from the coordinates.
inline double ref_distance(const Instance& inst, CityId a, CityId b) {
    const City& p = inst.city(a);
    const City& q = inst.city(b);
    return std::sqrt((p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y));
}

inline double ref_tour_cost(const Instance& inst, const std::vector<CityId>& seq) {
    double cost = 0.0;
    CityId prev = kDepot;
    for (CityId c : seq) {
        cost += ref_distance(inst, prev, c);
        prev = c;
    }
    return seq.empty() ? 0.0 : cost + ref_distance(inst, prev, kDepot);
}

inline double ref_cost(const Instance& inst, const Solution& s) {
    double total = 0.0;
    for (const Tour& t : s.tours) total += ref_tour_cost(inst, t.cities);
    return total;
}

/// Uniformly shuffled customers split into k tours with random admissible sizes.
inline Solution random_solution(const Instance& inst, Rng& rng) {
    const int k = inst.salesmen();
    std::vector<int> sizes(static_cast<std::size_t>(k), inst.min_cities());
    int spare = inst.customer_count() - k * inst.min_cities();
    while (spare > 0) {
        const auto t = static_cast<std::size_t>(uniform_below(rng, static_cast<std::uint64_t>(k)));
        if (sizes[t] < inst.max_cities()) {
            ++sizes[t];
            --spare;
        }
    }
    std::vector<int> order = inst.customers();
    partial_shuffle(order, order.size(), rng);
    Solution s;
    std::size_t next = 0;
    for (int size : sizes) {
        Tour t;
        for (int i = 0; i < size; ++i) t.cities.push_back(order[next++]);
        s.tours.push_back(std::move(t));
    }
    refresh_cost(s, inst);
    return s;
}

/// Order-insensitive form: each tour in its lexicographically smaller
/// direction, tours sorted.
inline std::vector<std::vector<CityId>> canonical(const Solution& s) {
    std::vector<std::vector<CityId>> out;
    for (const Tour& t : s.tours) {
        std::vector<CityId> fwd = t.cities;
        std::vector<CityId> bwd(fwd.rbegin(), fwd.rend());
        out.push_back(std::min(fwd, bwd));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace support
