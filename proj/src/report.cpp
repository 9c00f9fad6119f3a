#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bmtsp/io.hpp"
#include "bmtsp/solver.hpp"

namespace bmtsp {

double gap(double cost_a, double cost_b) {
    if (!(cost_b > 0.0)) throw std::domain_error("reference cost must be positive");
    return (cost_a - cost_b) / cost_b * 100.0;
}

std::string format_gap(double percent) {
    char buf[64];
    const double rounded = std::round(percent * 100.0) / 100.0;
    std::snprintf(buf, sizeof buf, "%+.2f%%", rounded == 0.0 ? 0.0 : rounded);
    std::string text = buf;
    // Negative gaps carry a sign; positive ones are printed bare.
    if (text.front() == '+') text.erase(0, 1);
    return text;
}

void write_trajectory_csv(std::ostream& out, const RunReport& report, bool header) {
    if (header) out << "instance,seed,restart,phase,iteration,cost,seconds\n";
    for (const auto& rec : report.restarts) {
        for (const auto& point : rec.trajectory) {
            out << report.instance << ',' << rec.seed << ',' << rec.restart << ','
                << to_string(point.phase) << ',' << point.iteration << ','
                << format_shortest(point.cost) << ',' << format_shortest(point.seconds) << '\n';
        }
    }
}

std::string format_report_table(const RunReport& report) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-8s %-20s %14s %14s %10s %10s %s\n", "restart", "seed",
                  "constructed", "final", "phase2_s", "phase3_s", "");
    out << line;
    for (const auto& rec : report.restarts) {
        const double constructed = rec.trajectory.empty() ? rec.final_cost : rec.trajectory.front().cost;
        std::snprintf(line, sizeof line, "%-8d %-20llu %14.2f %14.2f %10.3f %10.3f %s\n", rec.restart,
                      static_cast<unsigned long long>(rec.seed), constructed, rec.final_cost,
                      rec.construction_seconds, rec.relocate_subtours_seconds + rec.local_search_seconds,
                      rec.restart == report.best_restart ? "best" : (rec.truncated ? "truncated" : ""));
        out << line;
    }
    std::snprintf(line, sizeof line, "best %.2f (restart %d), %zu restarts, %.2fs%s\n",
                  report.best.total_cost, report.best_restart, report.restarts.size(),
                  report.wall_seconds, report.truncated ? ", time limit reached" : "");
    out << line;
    return out.str();
}

}  // namespace bmtsp
