#pragma once

/// @file model.hpp
/// Core domain types for the Euclidean bounded multiple traveling salesman
/// problem: cities, instances, tours, solutions, cost evaluation and
/// feasibility validation.

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bmtsp {

/// 1-based city identifier, matching TSPLIB node numbering. City 1 is the depot.
using CityId = int;

inline constexpr CityId kDepot = 1;

struct City {
    CityId id = 0;
    double x = 0.0;
    double y = 0.0;
};

/// Exact Euclidean distance, or TSPLIB's nearest-integer EUC_2D convention.
enum class DistanceConvention { exact, tsplib_rounded };

/// A city id that does not belong to the instance.
class InvalidReference : public std::out_of_range {
public:
    explicit InvalidReference(CityId id);
    CityId id() const noexcept { return id_; }

private:
    CityId id_;
};

/// Bounds that cannot be met: k*m_min > n or n > k*m_max (or malformed bounds).
class InfeasibleInstance : public std::runtime_error {
public:
    InfeasibleInstance(const std::string& what, long long lower_product, long long upper_product,
                       long long customers);
    long long lower_product() const noexcept { return lower_product_; }
    long long upper_product() const noexcept { return upper_product_; }
    long long customers() const noexcept { return customers_; }

private:
    long long lower_product_;
    long long upper_product_;
    long long customers_;
};

/// A precondition of an operation was not met by the caller.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

double distance(const City& a, const City& b);

/// Throws InfeasibleInstance unless 1 <= m_min <= m_max, k >= 1 and
/// k*m_min <= customers <= k*m_max.
void check_feasible(long long customers, int salesmen, int min_cities, int max_cities);

class Instance {
public:
    /// `cities` must hold ids 1..N in any order; city 1 becomes the depot.
    /// Throws InfeasibleInstance when the bounds cannot be satisfied.
    Instance(std::string name, std::vector<City> cities, int salesmen, int min_cities,
             int max_cities, DistanceConvention convention = DistanceConvention::exact);

    const std::string& name() const noexcept { return name_; }
    std::span<const City> cities() const noexcept { return cities_; }
    CityId depot() const noexcept { return kDepot; }
    int salesmen() const noexcept { return salesmen_; }
    int min_cities() const noexcept { return min_cities_; }
    int max_cities() const noexcept { return max_cities_; }
    DistanceConvention convention() const noexcept { return convention_; }

    /// Number of non-depot cities (n).
    int customer_count() const noexcept { return static_cast<int>(cities_.size()) - 1; }
    std::vector<CityId> customers() const;

    bool contains(CityId id) const noexcept {
        return id >= 1 && id <= static_cast<CityId>(cities_.size());
    }
    const City& city(CityId id) const;

    /// Unchecked distance between two valid ids.
    double distance(CityId a, CityId b) const noexcept {
        if (matrix_) return (*matrix_)[static_cast<std::size_t>(a - 1) * cities_.size() + (b - 1)];
        return compute_distance(a, b);
    }

    /// Same instance with another distance convention.
    Instance with_convention(DistanceConvention convention) const;

    /// Precomputes the full distance matrix. Only allowed for up to
    /// kMaxCachedCities cities; distances are otherwise computed on demand.
    void enable_distance_cache();
    bool distance_cache_enabled() const noexcept { return matrix_ != nullptr; }

    static constexpr int kMaxCachedCities = 2001;

private:
    double compute_distance(CityId a, CityId b) const noexcept;

    std::string name_;
    std::vector<City> cities_;  // index = id - 1
    int salesmen_;
    int min_cities_;
    int max_cities_;
    DistanceConvention convention_;
    std::shared_ptr<const std::vector<double>> matrix_;
};

/// One salesman's route. The depot is implicit before the first and after
/// the last city.
struct Tour {
    std::vector<CityId> cities;

    int size() const noexcept { return static_cast<int>(cities.size()); }
    bool empty() const noexcept { return cities.empty(); }
    friend bool operator==(const Tour&, const Tour&) = default;
};

struct Solution {
    std::vector<Tour> tours;
    double total_cost = 0.0;  // cache; see refresh_cost
};

/// Closed-walk cost depot -> cities... -> depot. Empty tours cost 0.
/// Throws InvalidReference for ids outside the instance.
double tour_cost(const Tour& tour, const Instance& inst);

/// Sum of tour costs (does not touch the cache).
double solution_cost(const Solution& s, const Instance& inst);

/// Recomputes and stores s.total_cost; returns it.
double refresh_cost(Solution& s, const Instance& inst);

enum class ViolationKind {
    tour_too_small,
    tour_too_large,
    duplicate_city,
    missing_city,
    unknown_city,
    depot_in_tour,
    wrong_tour_count,
    cost_mismatch,
};

const char* to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    int tour = -1;     // 0-based tour index, -1 when not tied to one tour
    CityId city = 0;   // offending city, 0 when not applicable
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    std::size_t count(ViolationKind kind) const;
    std::string to_string() const;
};

inline constexpr double kCostTolerance = 1e-6;

/// Checks every Solution invariant. Violations are reported, never thrown.
ValidationReport validate(const Solution& s, const Instance& inst);

}  // namespace bmtsp
