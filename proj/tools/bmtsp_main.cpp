// bmtsp: command-line front end for the bounded multiple TSP solver.
//
// Exit codes: 0 success, 1 usage / I/O / parse error, 2 infeasible
// instance, 3 solution fails validation.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bmtsp/ilp.hpp"
#include "bmtsp/io.hpp"
#include "bmtsp/oracle.hpp"
#include "bmtsp/solver.hpp"

namespace fs = std::filesystem;
using namespace bmtsp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInvalid = 3;

struct BoundFlags {
    std::optional<int> salesmen;
    std::optional<int> min_cities;
    std::optional<int> max_cities;

    void attach(CLI::App* cmd) {
        cmd->add_option("--salesmen", salesmen, "Override SALESMEN from the file")->check(CLI::PositiveNumber);
        cmd->add_option("--min-cities", min_cities, "Override MIN_CITIES from the file")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--max-cities", max_cities, "Override MAX_CITIES from the file")
            ->check(CLI::PositiveNumber);
    }

    BoundOverrides overrides() const { return {salesmen, min_cities, max_cities}; }
};

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + path.string());
    out << text;
    if (!out.flush()) throw std::system_error(errno, std::generic_category(), "cannot write " + path.string());
}

void print_infeasible(const InfeasibleInstance& e) {
    std::cerr << "infeasible instance: " << e.what() << "\n"
              << "  salesmen * min_cities = " << e.lower_product() << "\n"
              << "  salesmen * max_cities = " << e.upper_product() << "\n"
              << "  customers             = " << e.customers() << "\n";
}

// Runs `body` and maps library exceptions onto exit codes.
template <class F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const InfeasibleInstance& e) {
        print_infeasible(e);
        return kExitInfeasible;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
    } catch (const std::system_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kExitError;
}

struct SolveArgs {
    std::string instance;
    SolverConfig cfg;
    BoundFlags bounds;
    std::string out;
    std::string csv;
    bool exact = false;
    bool table = false;
};

int cmd_solve(const SolveArgs& a) {
    return guarded([&] {
        const auto convention = a.cfg.round_tsplib ? DistanceConvention::tsplib_rounded : DistanceConvention::exact;
        Instance inst = load_instance(a.instance, a.bounds.overrides(), convention);
        const auto start = std::chrono::steady_clock::now();
        Solution best;
        std::optional<std::uint64_t> seed;
        if (a.exact) {
            best = solve_exact(inst).solution;
        } else {
            const RunReport report = solve(inst, a.cfg);
            best = report.best;
            seed = report.best_seed;
            if (!a.csv.empty()) {
                std::ostringstream csv;
                write_trajectory_csv(csv, report);
                write_file(a.csv, csv.str());
            }
            if (a.table) std::cout << format_report_table(report);
            if (report.truncated) std::cerr << "warning: time limit reached, returning best solution so far\n";
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const std::string text = write_solution(best, inst, seed);
        if (!a.out.empty()) {
            write_file(a.out, text);
        } else if (!a.table) {
            std::cout << text;
        }
        char line[160];
        std::snprintf(line, sizeof line, "%s cost %s time %.3f s\n", inst.name().c_str(),
                      format_fixed2(best.total_cost).c_str(), seconds);
        (a.out.empty() && !a.table ? std::cerr : std::cout) << line;
        return kExitOk;
    });
}

struct GenerateArgs {
    std::string source;
    std::vector<int> mmax;
    bool all = false;
    bool count_includes_depot = false;
    std::string out_dir = ".";
};

int cmd_generate(const GenerateArgs& a) {
    return guarded([&] {
        const TspData tsp = load_tsp(a.source);
        std::vector<int> values = a.mmax;
        if (a.all) values.insert(values.end(), {30, 40, 50});
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        if (values.empty()) throw std::invalid_argument("nothing to generate: pass --mmax or --all");
        fs::create_directories(a.out_dir);
        int written = 0;
        for (int m : values) {
            try {
                const Instance inst = generate_instance(tsp, m, a.count_includes_depot);
                const fs::path path = fs::path(a.out_dir) / (inst.name() + ".bmtsp");
                write_file(path, write_instance(inst));
                std::cout << path.string() << ": SALESMEN " << inst.salesmen() << " MIN_CITIES "
                          << inst.min_cities() << " MAX_CITIES " << inst.max_cities() << "\n";
                ++written;
            } catch (const InfeasibleInstance& e) {
                std::cerr << "warning: skipping max_cities " << m << ": " << e.what() << "\n";
            }
        }
        return written > 0 ? kExitOk : kExitInfeasible;
    });
}

int cmd_validate(const std::string& instance_path, const std::string& solution_path, const BoundFlags& bounds,
                 bool round_tsplib) {
    return guarded([&] {
        const auto convention = round_tsplib ? DistanceConvention::tsplib_rounded : DistanceConvention::exact;
        const Instance inst = load_instance(instance_path, bounds.overrides(), convention);
        const SolutionFile file = load_solution(solution_path);
        if (file.instance_name != inst.name()) {
            std::cerr << "warning: solution names instance '" << file.instance_name << "', checking against '"
                      << inst.name() << "'\n";
        }
        const ValidationReport report = validate(file.solution, inst);
        if (report.ok()) {
            std::cout << "valid: " << file.solution.tours.size() << " tours, cost "
                      << format_fixed2(file.solution.total_cost) << "\n";
            return kExitOk;
        }
        std::cout << report.to_string();
        return kExitInvalid;
    });
}

int cmd_export_ilp(const std::string& instance_path, const std::string& out, const BoundFlags& bounds,
                   bool round_tsplib) {
    return guarded([&] {
        const auto convention = round_tsplib ? DistanceConvention::tsplib_rounded : DistanceConvention::exact;
        const Instance inst = load_instance(instance_path, bounds.overrides(), convention);
        const std::string text = export_lp(build_model(inst));
        if (out.empty()) {
            std::cout << text;
        } else {
            write_file(out, text);
        }
        return kExitOk;
    });
}

int cmd_gap(double a, double b) {
    return guarded([&] {
        std::cout << format_gap(gap(a, b)) << "\n";
        return kExitOk;
    });
}

struct BenchArgs {
    std::string dir;
    std::string out;
    std::string trajectory;
    SolverConfig cfg;
    int jobs = 1;
};

struct BenchRow {
    std::string line;
    std::string trajectory;
    bool failed = false;
};

int cmd_bench(const BenchArgs& a) {
    return guarded([&] {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(a.dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".bmtsp") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw std::invalid_argument("no .bmtsp files in " + a.dir);

        std::vector<BenchRow> rows(files.size());
        std::atomic<std::size_t> next{0};
        std::mutex log_mutex;
        auto worker = [&] {
            for (std::size_t i = next++; i < files.size(); i = next++) {
                BenchRow& row = rows[i];
                try {
                    const Instance inst = load_instance(files[i]);
                    SolverConfig cfg = a.cfg;
                    cfg.jobs = 1;
                    const RunReport report = solve(inst, cfg);
                    const ValidationReport check = validate(report.best, inst);
                    std::ostringstream line;
                    line << inst.name() << ',' << inst.customer_count() << ',' << inst.salesmen() << ','
                         << inst.min_cities() << ',' << inst.max_cities() << ',' << cfg.seed << ','
                         << report.restarts.size() << ',' << report.best_restart << ','
                         << format_shortest(report.best.total_cost) << ',' << format_shortest(report.wall_seconds)
                         << ',' << (report.truncated ? 1 : 0) << ',' << check.violations.size() << '\n';
                    row.line = line.str();
                    std::ostringstream traj;
                    write_trajectory_csv(traj, report, false);
                    row.trajectory = traj.str();
                    row.failed = !check.ok();
                    std::lock_guard lock(log_mutex);
                    std::cerr << inst.name() << ": " << format_fixed2(report.best.total_cost) << " in "
                              << format_fixed2(report.wall_seconds) << " s\n";
                } catch (const std::exception& e) {
                    row.failed = true;
                    std::lock_guard lock(log_mutex);
                    std::cerr << files[i].string() << ": " << e.what() << "\n";
                }
            }
        };
        const int jobs = std::max(1, std::min<int>(a.jobs, static_cast<int>(files.size())));
        {
            std::vector<std::jthread> pool;
            for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
            worker();
        }

        std::string summary =
            "instance,customers,salesmen,min_cities,max_cities,seed,restarts,best_restart,cost,seconds,truncated,"
            "violations\n";
        std::string trajectory = "instance,seed,restart,phase,iteration,cost,seconds\n";
        bool failed = false;
        for (const BenchRow& row : rows) {
            summary += row.line;
            trajectory += row.trajectory;
            failed = failed || row.failed;
        }
        if (a.out.empty()) {
            std::cout << summary;
        } else {
            write_file(a.out, summary);
        }
        if (!a.trajectory.empty()) write_file(a.trajectory, trajectory);
        return failed ? kExitError : kExitOk;
    });
}

void add_solver_options(CLI::App* cmd, SolverConfig& cfg) {
    cmd->add_option("--seed", cfg.seed, "Base seed; restart r uses a seed derived from it")->capture_default_str();
    cmd->add_option("--restarts", cfg.restarts, "Independent restarts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--time-limit", cfg.time_limit_seconds, "Wall-clock limit in seconds, 0 for none")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_flag("--round-tsplib", cfg.round_tsplib, "Use TSPLIB nint() distances instead of exact ones");
    cmd->add_flag("--distance-cache", cfg.cache_distances, "Precompute the distance matrix (small instances)");
    cmd->add_option("--construction", cfg.construction_strategy, "Tour construction strategy")
        ->check(CLI::IsMember({"cheapest-insertion"}))
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded multiple TSP: partition, construct, improve."};
    app.require_subcommand(1);
    app.set_version_flag("--version", "bmtsp 1.0.0");
    int exit_code = kExitOk;

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Solve an instance and write the best solution");
    solve_cmd->add_option("instance", solve_args.instance, "Instance file")->required()->check(CLI::ExistingFile);
    add_solver_options(solve_cmd, solve_args.cfg);
    solve_cmd->add_option("--jobs", solve_args.cfg.jobs, "Restarts run in parallel")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    solve_cmd->add_option("--out", solve_args.out, "Solution file (default: stdout)");
    solve_cmd->add_option("--csv", solve_args.csv, "Per-restart cost trajectory CSV");
    solve_cmd->add_flag("--table", solve_args.table, "Print a per-restart summary table");
    solve_cmd->add_flag("--exact", solve_args.exact,
                        "Exhaustive optimum instead of the heuristic (at most " +
                            std::to_string(kMaxExactCustomers) + " customers and " +
                            std::to_string(kMaxExactSalesmen) + " salesmen)");
    solve_args.bounds.attach(solve_cmd);
    solve_cmd->callback([&] { exit_code = cmd_solve(solve_args); });

    GenerateArgs gen_args;
    auto* gen_cmd = app.add_subcommand("generate", "Derive bounded instances from a TSPLIB file");
    gen_cmd->add_option("source", gen_args.source, "TSPLIB EUC_2D file")->required()->check(CLI::ExistingFile);
    gen_cmd->add_option("--mmax", gen_args.mmax, "max_cities value (repeatable)")->check(CLI::PositiveNumber);
    gen_cmd->add_flag("--all", gen_args.all, "Generate for max_cities 30, 40 and 50");
    gen_cmd->add_flag("--count-includes-depot", gen_args.count_includes_depot,
                      "Count the depot in n when deriving the salesmen count");
    gen_cmd->add_option("--out-dir", gen_args.out_dir, "Output directory")->capture_default_str();
    gen_cmd->callback([&] { exit_code = cmd_generate(gen_args); });

    std::string val_instance;
    std::string val_solution;
    BoundFlags val_bounds;
    bool val_round = false;
    auto* val_cmd = app.add_subcommand("validate", "Check a solution file against an instance");
    val_cmd->add_option("instance", val_instance, "Instance file")->required()->check(CLI::ExistingFile);
    val_cmd->add_option("solution", val_solution, "Solution file")->required()->check(CLI::ExistingFile);
    val_cmd->add_flag("--round-tsplib", val_round, "Recompute costs with TSPLIB nint() distances");
    val_bounds.attach(val_cmd);
    val_cmd->callback([&] { exit_code = cmd_validate(val_instance, val_solution, val_bounds, val_round); });

    std::string ilp_instance;
    std::string ilp_out;
    BoundFlags ilp_bounds;
    bool ilp_round = false;
    auto* ilp_cmd = app.add_subcommand("export-ilp", "Write the ILP model in CPLEX LP format");
    ilp_cmd->add_option("instance", ilp_instance, "Instance file")->required()->check(CLI::ExistingFile);
    ilp_cmd->add_option("--out", ilp_out, "LP file (default: stdout)");
    ilp_cmd->add_flag("--round-tsplib", ilp_round, "Use TSPLIB nint() distances as weights");
    ilp_bounds.attach(ilp_cmd);
    ilp_cmd->callback([&] { exit_code = cmd_export_ilp(ilp_instance, ilp_out, ilp_bounds, ilp_round); });

    double gap_a = 0.0;
    double gap_b = 0.0;
    auto* gap_cmd = app.add_subcommand("gap", "Relative difference (a - b) / b in percent");
    gap_cmd->add_option("a", gap_a, "Cost being compared")->required();
    gap_cmd->add_option("b", gap_b, "Reference cost")->required();
    gap_cmd->callback([&] { exit_code = cmd_gap(gap_a, gap_b); });

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Solve every .bmtsp file in a directory");
    bench_cmd->add_option("--dir", bench_args.dir, "Directory of instances")->required()->check(CLI::ExistingDirectory);
    add_solver_options(bench_cmd, bench_args.cfg);
    bench_cmd->add_option("--jobs", bench_args.jobs, "Instances solved in parallel")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd->add_option("--out", bench_args.out, "Summary CSV (default: stdout)");
    bench_cmd->add_option("--trajectory", bench_args.trajectory, "Trajectory CSV for every instance");
    bench_cmd->callback([&] { exit_code = cmd_bench(bench_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }
    return exit_code;
}
