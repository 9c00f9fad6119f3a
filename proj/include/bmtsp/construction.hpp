#pragma once

// Phase 2: one closed tour per subset, plus the 2-opt local search used by
// every Phase 3 move.

#include <memory>
#include <span>
#include <string_view>

#include "bmtsp/model.hpp"
#include "bmtsp/partition.hpp"

namespace bmtsp {

/// Builds a tour through `vertices` and the depot.
class ConstructionStrategy {
public:
    virtual ~ConstructionStrategy() = default;
    virtual std::string_view name() const noexcept = 0;
    virtual Tour build(std::span<const CityId> vertices, const Instance& inst) const = 0;
};

/// Cheapest insertion seeded with the 2-cycle (depot, farthest vertex).
/// Each step inserts the vertex whose best insertion increases the cycle
/// length least (ties: lowest id). Best positions are cached per vertex and
/// rescanned only when their edge is consumed, which keeps the typical cost
/// at O(m^2).
class CheapestInsertion final : public ConstructionStrategy {
public:
    std::string_view name() const noexcept override { return "cheapest-insertion"; }
    Tour build(std::span<const CityId> vertices, const Instance& inst) const override;
};

/// Throws std::invalid_argument for an unknown name.
std::unique_ptr<ConstructionStrategy> make_construction_strategy(std::string_view name);

/// Throws ContractViolation for an empty set or one containing the depot.
Tour construct_tour(std::span<const CityId> vertices, const Instance& inst,
                    const ConstructionStrategy& strategy = CheapestInsertion{});

inline constexpr double kImprovementEpsilon = 1e-9;

/// Best-improvement 2-opt over the closed cycle depot -> tour -> depot,
/// including exchanges that touch the depot edges. Stops when no exchange
/// improves the cost by more than kImprovementEpsilon.
Tour two_opt(Tour tour, const Instance& inst);

/// One tour per subset; the result has its cost cache filled in.
Solution construct_solution(const Partition& p, const Instance& inst,
                            const ConstructionStrategy& strategy = CheapestInsertion{});

}  // namespace bmtsp
