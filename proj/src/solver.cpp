#include "bmtsp/solver.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <chrono>
#include <stdexcept>
#include <thread>

#include "bmtsp/partition.hpp"
#include "bmtsp/rng.hpp"

namespace bmtsp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::construction: return "construction";
        case Phase::relocate_subtours: return "relocate_subtours";
        case Phase::local_search: return "local_search";
    }
    return "?";
}

RestartRecord solve_once(const Instance& inst, std::uint64_t seed, const ConstructionStrategy& strategy,
                         const SearchControl& control) {
    RestartRecord record;
    record.seed = seed;
    const auto start = Clock::now();

    const Partition parts = partition(inst, seed);
    record.partition_seconds = seconds_since(start);

    auto mark = Clock::now();
    Solution current = construct_solution(parts, inst, strategy);
    record.construction_seconds = std::chrono::duration<double>(Clock::now() - mark).count();
    record.trajectory.push_back({Phase::construction, 0, current.total_cost, seconds_since(start)});

    mark = Clock::now();
    SubtourRelocationResult stage1 = relocate_subtours(std::move(current), inst, control);
    current = std::move(stage1.solution);
    record.relocate_subtours_seconds = std::chrono::duration<double>(Clock::now() - mark).count();
    record.trajectory.push_back({Phase::relocate_subtours, 0, current.total_cost, seconds_since(start)});
    record.truncated = stage1.interrupted;

    mark = Clock::now();
    for (int iteration = 1; !record.truncated; ++iteration) {
        if (control.expired()) {
            record.truncated = true;
            break;
        }
        StepResult relocated = relocate_a_vertex(std::move(current), inst);
        StepResult swapped = swap_vertices(std::move(relocated.solution), inst);
        current = std::move(swapped.solution);
        if (relocated.gain == 0.0 && swapped.gain == 0.0) break;
        record.trajectory.push_back({Phase::local_search, iteration, current.total_cost,
                                     seconds_since(start)});
    }
    record.local_search_seconds = std::chrono::duration<double>(Clock::now() - mark).count();
    record.final_cost = current.total_cost;
    record.solution = std::move(current);
    return record;
}

RunReport solve(const Instance& input, const SolverConfig& cfg) {
    if (cfg.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    if (cfg.time_limit_seconds < 0) throw std::invalid_argument("time limit must be >= 0");
    check_feasible(input.customer_count(), input.salesmen(), input.min_cities(), input.max_cities());
    const auto strategy = make_construction_strategy(cfg.construction_strategy);

    Instance inst = cfg.round_tsplib ? input.with_convention(DistanceConvention::tsplib_rounded) : input;
    if (cfg.cache_distances && static_cast<int>(inst.cities().size()) <= Instance::kMaxCachedCities) {
        inst.enable_distance_cache();
    }

    const auto start = Clock::now();
    SearchControl control;
    if (cfg.time_limit_seconds > 0) {
        control.deadline = start + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(cfg.time_limit_seconds));
    }

    const auto restarts = static_cast<std::size_t>(cfg.restarts);
    std::vector<std::optional<RestartRecord>> records(restarts);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t r = next++; r < restarts; r = next++) {
            // Restart 0 always runs so that there is a solution to return.
            if (r > 0 && control.expired()) continue;
            RestartRecord rec = solve_once(inst, derive_seed(cfg.seed, r), *strategy, control);
            rec.restart = static_cast<int>(r);
            records[r] = std::move(rec);
        }
    };
    const auto jobs = static_cast<std::size_t>(std::clamp(cfg.jobs, 1, cfg.restarts));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    }

    RunReport report;
    report.instance = inst.name();
    for (auto& rec : records) {
        if (!rec) {
            report.truncated = true;
            continue;
        }
        report.truncated = report.truncated || rec->truncated;
        if (report.restarts.empty() || rec->final_cost < report.best.total_cost) {
            report.best = rec->solution;
            report.best_restart = rec->restart;
            report.best_seed = rec->seed;
        }
        report.restarts.push_back(std::move(*rec));
    }
    report.wall_seconds = seconds_since(start);
    return report;
}

}  // namespace bmtsp
