#pragma once

/// @file oracle.hpp
/// Exhaustive solver for tiny instances: every partition of the customers
/// into k blocks of admissible size, and every ordering of each block up to
/// reversal. Used as ground truth by the tests and by `solve --exact`.

#include <stdexcept>
#include <vector>

#include "bmtsp/model.hpp"

namespace bmtsp {

inline constexpr int kMaxExactCustomers = 10;
inline constexpr int kMaxExactSalesmen = 3;
inline constexpr int kMaxEnumeratedCustomers = 6;

class OracleRefused : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExactResult {
    Solution solution;
    double cost = 0.0;
};

/// Minimum-cost solution. Tours come out in canonical form (lower end
/// first, ordered by smallest member); among equal costs the
/// lexicographically smallest encoding wins. Throws OracleRefused above
/// the size guards and InfeasibleInstance when no solution exists.
ExactResult solve_exact(const Instance& inst);

/// Every valid solution in canonical form, for at most
/// kMaxEnumeratedCustomers customers.
std::vector<Solution> enumerate_solutions(const Instance& inst);

/// Cheapest depot tour through `cities` (any order), canonical direction.
Tour best_tour_exact(std::vector<CityId> cities, const Instance& inst);

}  // namespace bmtsp
