#pragma once

/// @file io.hpp
/// TSPLIB EUC_2D parsing with the BMTSP extension keys (SALESMEN,
/// MIN_CITIES, MAX_CITIES), generation of derived instances, and the
/// solution file format.
///
/// Solution file layout (one tour line per salesman):
///
///     NAME: pr76_5 SALESMEN: 5 SEED: 42
///     TOTAL_COST: 151568.87 # 151568.87012345
///     TOUR 1: 1 12 7 ... 1 COST: 30111.20 # 30111.2019
///
/// Costs appear rounded to two decimals, followed by the shortest
/// round-trip representation after `#`. SEED is `none` when unknown.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bmtsp/model.hpp"

namespace bmtsp {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message);
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Raw content of a TSPLIB file; the bounds are present only when the file
/// carries the extension keys.
struct TspData {
    std::string name;
    std::string comment;
    std::vector<City> cities;
    std::optional<int> salesmen;
    std::optional<int> min_cities;
    std::optional<int> max_cities;

    int customer_count() const noexcept { return static_cast<int>(cities.size()) - 1; }
};

/// Values supplied outside the file (e.g. from the command line). When set
/// they take precedence over the file's own keys.
struct BoundOverrides {
    std::optional<int> salesmen;
    std::optional<int> min_cities;
    std::optional<int> max_cities;
};

TspData parse_tsp(std::istream& in);

/// Parses and validates an instance. Throws ParseError for malformed input
/// and InfeasibleInstance when the bounds cannot be met.
Instance parse_instance(std::istream& in, const BoundOverrides& overrides = {},
                        DistanceConvention convention = DistanceConvention::exact);

Instance load_instance(const std::filesystem::path& path, const BoundOverrides& overrides = {},
                       DistanceConvention convention = DistanceConvention::exact);
TspData load_tsp(const std::filesystem::path& path);

/// TSPLIB text of an instance including the extension keys.
std::string write_instance(const Instance& inst);

struct GeneratedBounds {
    int salesmen;
    int min_cities;
    int max_cities;
};

/// k = ceil(1.3 n / m_max), m_min = ceil(0.6 m_max). With
/// `count_includes_depot` the depot is counted in n.
GeneratedBounds generation_bounds(int customers, int max_cities, bool count_includes_depot = false);

/// Derived instance named `<name>_<k>`. Throws InfeasibleInstance (with
/// both bound products) when k*m_min > n, and std::invalid_argument when the
/// source has fewer than 2 non-depot cities.
Instance generate_instance(const TspData& tsp, int max_cities, bool count_includes_depot = false);

class InvalidSolution : public std::runtime_error {
public:
    explicit InvalidSolution(ValidationReport report);
    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

struct SolutionFile {
    std::string instance_name;
    int salesmen = 0;
    std::optional<std::uint64_t> seed;
    Solution solution;
    std::vector<double> tour_costs;
};

/// Throws InvalidSolution when `s` does not validate against `inst`.
std::string write_solution(const Solution& s, const Instance& inst,
                           std::optional<std::uint64_t> seed = std::nullopt);

SolutionFile parse_solution(std::istream& in);
SolutionFile load_solution(const std::filesystem::path& path);

/// Shortest decimal text that reads back as the same double.
std::string format_shortest(double value);
/// Fixed two-decimal text.
std::string format_fixed2(double value);

}  // namespace bmtsp
