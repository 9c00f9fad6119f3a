#pragma once

/// @file solver.hpp
/// The three-phase partition / construction / improvement heuristic with
/// seeded restarts, an optional time limit and per-restart telemetry.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bmtsp/construction.hpp"
#include "bmtsp/improvement.hpp"
#include "bmtsp/model.hpp"

namespace bmtsp {

struct SolverConfig {
    std::uint64_t seed = 1;
    int restarts = 10;
    double time_limit_seconds = 0.0;  // 0 = unlimited
    bool round_tsplib = false;
    bool cache_distances = false;
    std::string construction_strategy = "cheapest-insertion";
    int jobs = 1;  // worker threads for restarts
};

enum class Phase { construction, relocate_subtours, local_search };

const char* to_string(Phase phase);

struct TrajectoryPoint {
    Phase phase;
    int iteration = 0;  // local_search iteration, 0 otherwise
    double cost = 0.0;
    double seconds = 0.0;  // since the restart began
};

struct RestartRecord {
    int restart = 0;
    std::uint64_t seed = 0;
    std::vector<TrajectoryPoint> trajectory;
    double partition_seconds = 0.0;
    double construction_seconds = 0.0;
    double relocate_subtours_seconds = 0.0;
    double local_search_seconds = 0.0;
    double final_cost = 0.0;
    bool truncated = false;
    Solution solution;
};

struct RunReport {
    std::string instance;
    Solution best;
    int best_restart = 0;
    std::uint64_t best_seed = 0;
    std::vector<RestartRecord> restarts;
    bool truncated = false;
    double wall_seconds = 0.0;
};

/// One restart from `seed`: partition, construction, sub-tour relocation,
/// then alternating vertex relocation and swap passes until neither
/// improves. Phases 1 and 2 always complete; Phase 3 stops early (and the
/// record is marked truncated) once `control` expires.
RestartRecord solve_once(const Instance& inst, std::uint64_t seed,
                         const ConstructionStrategy& strategy, const SearchControl& control = {});

/// Runs cfg.restarts independent restarts, seed_r = derive_seed(cfg.seed, r),
/// and keeps the cheapest (ties: lowest restart index). Throws
/// InfeasibleInstance before doing any work when the bounds cannot be met,
/// and std::invalid_argument for a bad config.
RunReport solve(const Instance& inst, const SolverConfig& cfg);

/// Relative percentage difference (a - b) / b * 100. Throws std::domain_error
/// when b <= 0.
double gap(double cost_a, double cost_b);

/// "-1.19%" style text, two decimals.
std::string format_gap(double percent);

/// Columns: instance,seed,restart,phase,iteration,cost,seconds
void write_trajectory_csv(std::ostream& out, const RunReport& report, bool header = true);

/// Human-readable per-restart summary table.
std::string format_report_table(const RunReport& report);

}  // namespace bmtsp
