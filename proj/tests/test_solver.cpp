#include <gtest/gtest.h>

#include <sstream>

#include "bmtsp/io.hpp"
#include "bmtsp/oracle.hpp"
#include "bmtsp/solver.hpp"
#include "support.hpp"

using namespace bmtsp;

namespace {

void expect_monotone(const RestartRecord& rec) {
    ASSERT_GE(rec.trajectory.size(), 2u);
    EXPECT_EQ(rec.trajectory[0].phase, Phase::construction);
    EXPECT_EQ(rec.trajectory[1].phase, Phase::relocate_subtours);
    for (std::size_t i = 2; i < rec.trajectory.size(); ++i) {
        EXPECT_EQ(rec.trajectory[i].phase, Phase::local_search);
        EXPECT_EQ(rec.trajectory[i].iteration, static_cast<int>(i) - 1);
    }
    for (std::size_t i = 1; i < rec.trajectory.size(); ++i) {
        EXPECT_LE(rec.trajectory[i].cost, rec.trajectory[i - 1].cost + kImprovementEpsilon);
    }
    EXPECT_EQ(rec.final_cost, rec.trajectory.back().cost);
}

}  // namespace

TEST(SolveOnce, ProducesAValidLocallyOptimalSolution) {
    const Instance inst = support::random_instance(21, 40, 4, 6, 14);
    const RestartRecord rec = solve_once(inst, 9, CheapestInsertion{});
    EXPECT_TRUE(validate(rec.solution, inst).ok());
    EXPECT_FALSE(rec.truncated);
    EXPECT_EQ(rec.seed, 9u);
    expect_monotone(rec);
    // Halting rule: neither single-vertex neighbourhood improves any more.
    EXPECT_EQ(relocate_a_vertex(rec.solution, inst).gain, 0.0);
    EXPECT_EQ(swap_vertices(rec.solution, inst).gain, 0.0);
}

TEST(Solve, DeterministicAndIndependentOfThreadCount) {
    const Instance inst = support::random_instance(22, 35, 3, 8, 15);
    SolverConfig cfg;
    cfg.seed = 5;
    cfg.restarts = 6;
    const RunReport a = solve(inst, cfg);
    const RunReport b = solve(inst, cfg);
    cfg.jobs = 3;
    const RunReport c = solve(inst, cfg);
    ASSERT_EQ(a.restarts.size(), 6u);
    for (std::size_t r = 0; r < 6; ++r) {
        EXPECT_EQ(a.restarts[r].seed, derive_seed(5, r));
        EXPECT_EQ(a.restarts[r].solution.tours, b.restarts[r].solution.tours);
        EXPECT_EQ(a.restarts[r].solution.tours, c.restarts[r].solution.tours);
    }
    EXPECT_EQ(a.best.tours, c.best.tours);
    EXPECT_EQ(a.best_restart, c.best_restart);
}

TEST(Solve, BestIsTheCheapestRestartEarliestOnTies) {
    const Instance inst = support::random_instance(23, 30, 3, 6, 14);
    SolverConfig cfg;
    cfg.restarts = 8;
    const RunReport report = solve(inst, cfg);
    double best = report.restarts.front().final_cost;
    int at = 0;
    for (const auto& rec : report.restarts) {
        if (rec.final_cost < best) {
            best = rec.final_cost;
            at = rec.restart;
        }
        expect_monotone(rec);
    }
    EXPECT_EQ(report.best_restart, at);
    EXPECT_EQ(report.best.total_cost, best);
    EXPECT_EQ(report.best_seed, derive_seed(cfg.seed, static_cast<std::uint64_t>(at)));
}

TEST(Solve, RoundedDistancesAndCacheOptions) {
    const Instance inst = support::random_instance(24, 25, 2, 10, 15);
    SolverConfig cfg;
    cfg.restarts = 2;
    cfg.round_tsplib = true;
    cfg.cache_distances = true;
    const RunReport report = solve(inst, cfg);
    const Instance rounded = inst.with_convention(DistanceConvention::tsplib_rounded);
    EXPECT_TRUE(validate(report.best, rounded).ok());
    EXPECT_EQ(report.best.total_cost, std::round(report.best.total_cost));
}

TEST(Solve, ConfigErrors) {
    const Instance inst = support::random_instance(25, 10, 2, 2, 8);
    SolverConfig cfg;
    cfg.restarts = 0;
    EXPECT_THROW(solve(inst, cfg), std::invalid_argument);
    cfg.restarts = 1;
    cfg.time_limit_seconds = -1;
    EXPECT_THROW(solve(inst, cfg), std::invalid_argument);
    cfg.time_limit_seconds = 0;
    cfg.construction_strategy = "random";
    EXPECT_THROW(solve(inst, cfg), std::invalid_argument);
}

TEST(Solve, TimeLimitReturnsAValidSolution) {
    const Instance inst = support::random_instance(26, 300, 10, 18, 40);
    SolverConfig cfg;
    cfg.restarts = 50;
    cfg.time_limit_seconds = 0.05;
    const RunReport report = solve(inst, cfg);
    EXPECT_TRUE(report.truncated);
    EXPECT_GE(report.restarts.size(), 1u);
    EXPECT_LT(report.restarts.size(), 50u);
    EXPECT_TRUE(validate(report.best, inst).ok());
    EXPECT_LT(report.wall_seconds, 5.0);
}

TEST(Solve, NeverBeatsTheExactOptimum) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Instance inst = support::random_instance(seed, 7, 2, 2, 4);
        SolverConfig cfg;
        cfg.restarts = 5;
        const double heuristic = solve(inst, cfg).best.total_cost;
        EXPECT_GE(heuristic, solve_exact(inst).cost - 1e-9);
    }
}

TEST(Gap, TablePairs) {
    EXPECT_EQ(format_gap(gap(151568.87, 153389.90)), "-1.19%");
    EXPECT_EQ(format_gap(gap(2204.27, 2291.82)), "-3.82%");
    EXPECT_EQ(format_gap(gap(570.35, 558.59)), "2.11%");
    EXPECT_EQ(format_gap(gap(464.11, 464.11)), "0.00%");
    EXPECT_EQ(format_gap(-0.001), "0.00%");
    EXPECT_THROW(gap(1.0, 0.0), std::domain_error);
    EXPECT_THROW(gap(1.0, -2.0), std::domain_error);
}

TEST(Reporting, TrajectoryCsvSchema) {
    const Instance inst = support::random_instance(27, 12, 2, 4, 8, 1000, "csv");
    SolverConfig cfg;
    cfg.restarts = 2;
    const RunReport report = solve(inst, cfg);
    std::ostringstream out;
    write_trajectory_csv(out, report);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "instance,seed,restart,phase,iteration,cost,seconds");
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6) << line;
        EXPECT_EQ(line.rfind("csv,", 0), 0u);
        ++rows;
    }
    EXPECT_EQ(rows, report.restarts[0].trajectory.size() + report.restarts[1].trajectory.size());
    EXPECT_NE(format_report_table(report).find("best"), std::string::npos);
}
