#include "bmtsp/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bmtsp {

InvalidReference::InvalidReference(CityId id)
    : std::out_of_range("unknown city id " + std::to_string(id)), id_(id) {}

InfeasibleInstance::InfeasibleInstance(const std::string& what, long long lower_product,
                                       long long upper_product, long long customers)
    : std::runtime_error(what),
      lower_product_(lower_product),
      upper_product_(upper_product),
      customers_(customers) {}

double distance(const City& a, const City& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

void check_feasible(long long customers, int salesmen, int min_cities, int max_cities) {
    const long long lower = static_cast<long long>(salesmen) * min_cities;
    const long long upper = static_cast<long long>(salesmen) * max_cities;
    std::ostringstream msg;
    if (salesmen < 1) {
        msg << "salesman count must be >= 1 (got " << salesmen << ")";
    } else if (min_cities < 1 || min_cities > max_cities) {
        msg << "bounds must satisfy 1 <= m_min <= m_max (got m_min=" << min_cities
            << ", m_max=" << max_cities << ")";
    } else if (lower > customers || customers > upper) {
        msg << "infeasible bounds: k*m_min = " << salesmen << "*" << min_cities << " = " << lower
            << ", k*m_max = " << salesmen << "*" << max_cities << " = " << upper
            << ", but n = " << customers << " non-depot cities";
    } else {
        return;
    }
    throw InfeasibleInstance(msg.str(), lower, upper, customers);
}

Instance::Instance(std::string name, std::vector<City> cities, int salesmen, int min_cities,
                   int max_cities, DistanceConvention convention)
    : name_(std::move(name)),
      cities_(std::move(cities)),
      salesmen_(salesmen),
      min_cities_(min_cities),
      max_cities_(max_cities),
      convention_(convention) {
    std::sort(cities_.begin(), cities_.end(),
              [](const City& a, const City& b) { return a.id < b.id; });
    if (cities_.empty()) throw std::invalid_argument("instance has no cities");
    for (std::size_t i = 0; i < cities_.size(); ++i) {
        const City& c = cities_[i];
        if (c.id != static_cast<CityId>(i + 1)) {
            throw std::invalid_argument("city ids must be exactly 1..N (found id " +
                                        std::to_string(c.id) + " at rank " +
                                        std::to_string(i + 1) + ")");
        }
        if (!std::isfinite(c.x) || !std::isfinite(c.y)) {
            throw std::invalid_argument("city " + std::to_string(c.id) +
                                        " has non-finite coordinates");
        }
    }
    check_feasible(customer_count(), salesmen_, min_cities_, max_cities_);
}

std::vector<CityId> Instance::customers() const {
    std::vector<CityId> ids;
    ids.reserve(cities_.size() - 1);
    for (CityId id = 2; id <= static_cast<CityId>(cities_.size()); ++id) ids.push_back(id);
    return ids;
}

const City& Instance::city(CityId id) const {
    if (!contains(id)) throw InvalidReference(id);
    return cities_[static_cast<std::size_t>(id - 1)];
}

double Instance::compute_distance(CityId a, CityId b) const noexcept {
    const double d = bmtsp::distance(cities_[static_cast<std::size_t>(a - 1)],
                                     cities_[static_cast<std::size_t>(b - 1)]);
    if (convention_ == DistanceConvention::tsplib_rounded) return std::floor(d + 0.5);
    return d;
}

Instance Instance::with_convention(DistanceConvention convention) const {
    Instance copy(name_, cities_, salesmen_, min_cities_, max_cities_, convention);
    if (matrix_) copy.enable_distance_cache();
    return copy;
}

void Instance::enable_distance_cache() {
    if (matrix_) return;
    const std::size_t n = cities_.size();
    if (n > static_cast<std::size_t>(kMaxCachedCities)) {
        throw ContractViolation("distance cache is limited to " +
                                std::to_string(kMaxCachedCities) + " cities");
    }
    auto m = std::make_shared<std::vector<double>>(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = compute_distance(static_cast<CityId>(i + 1), static_cast<CityId>(j + 1));
            (*m)[i * n + j] = d;
            (*m)[j * n + i] = d;
        }
    }
    matrix_ = std::move(m);
}

double tour_cost(const Tour& tour, const Instance& inst) {
    if (tour.cities.empty()) return 0.0;
    for (CityId id : tour.cities) {
        if (!inst.contains(id)) throw InvalidReference(id);
    }
    double cost = inst.distance(inst.depot(), tour.cities.front());
    for (std::size_t i = 0; i + 1 < tour.cities.size(); ++i) {
        cost += inst.distance(tour.cities[i], tour.cities[i + 1]);
    }
    return cost + inst.distance(tour.cities.back(), inst.depot());
}

double solution_cost(const Solution& s, const Instance& inst) {
    double total = 0.0;
    for (const Tour& t : s.tours) total += tour_cost(t, inst);
    return total;
}

double refresh_cost(Solution& s, const Instance& inst) {
    s.total_cost = solution_cost(s, inst);
    return s.total_cost;
}

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::tour_too_small: return "tour-too-small";
        case ViolationKind::tour_too_large: return "tour-too-large";
        case ViolationKind::duplicate_city: return "duplicate-city";
        case ViolationKind::missing_city: return "missing-city";
        case ViolationKind::unknown_city: return "unknown-city";
        case ViolationKind::depot_in_tour: return "depot-in-tour";
        case ViolationKind::wrong_tour_count: return "wrong-tour-count";
        case ViolationKind::cost_mismatch: return "cost-mismatch";
    }
    return "?";
}

std::size_t ValidationReport::count(ViolationKind kind) const {
    return static_cast<std::size_t>(std::count_if(
        violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; }));
}

std::string ValidationReport::to_string() const {
    if (violations.empty()) return "valid: no violations\n";
    std::ostringstream out;
    out << violations.size() << " violation(s)\n";
    for (const Violation& v : violations) {
        out << "  " << bmtsp::to_string(v.kind);
        if (v.tour >= 0) out << " tour=" << v.tour + 1;
        if (v.city != 0) out << " city=" << v.city;
        if (!v.detail.empty()) out << ": " << v.detail;
        out << '\n';
    }
    return out.str();
}

ValidationReport validate(const Solution& s, const Instance& inst) {
    ValidationReport report;
    auto add = [&report](ViolationKind kind, int tour, CityId city, std::string detail) {
        report.violations.push_back({kind, tour, city, std::move(detail)});
    };

    if (static_cast<int>(s.tours.size()) != inst.salesmen()) {
        add(ViolationKind::wrong_tour_count, -1, 0,
            "expected " + std::to_string(inst.salesmen()) + " tours, found " +
                std::to_string(s.tours.size()));
    }

    const std::size_t n_cities = inst.cities().size();
    std::vector<int> seen(n_cities + 1, 0);
    bool costable = true;
    for (std::size_t t = 0; t < s.tours.size(); ++t) {
        const Tour& tour = s.tours[t];
        const int ti = static_cast<int>(t);
        if (tour.size() < inst.min_cities()) {
            add(ViolationKind::tour_too_small, ti, 0,
                std::to_string(tour.size()) + " cities < m_min " + std::to_string(inst.min_cities()));
        }
        if (tour.size() > inst.max_cities()) {
            add(ViolationKind::tour_too_large, ti, 0,
                std::to_string(tour.size()) + " cities > m_max " + std::to_string(inst.max_cities()));
        }
        for (CityId id : tour.cities) {
            if (!inst.contains(id)) {
                add(ViolationKind::unknown_city, ti, id, "");
                costable = false;
            } else if (id == inst.depot()) {
                add(ViolationKind::depot_in_tour, ti, id, "");
            } else if (++seen[static_cast<std::size_t>(id)] == 2) {
                add(ViolationKind::duplicate_city, ti, id, "");
            }
        }
    }
    for (CityId id = 2; id <= static_cast<CityId>(n_cities); ++id) {
        if (seen[static_cast<std::size_t>(id)] == 0) add(ViolationKind::missing_city, -1, id, "");
    }

    if (costable) {
        const double actual = solution_cost(s, inst);
        if (!(std::abs(actual - s.total_cost) <= kCostTolerance)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "cached " << s.total_cost << " vs recomputed " << actual;
            add(ViolationKind::cost_mismatch, -1, 0, msg.str());
        }
    }
    return report;
}

}  // namespace bmtsp
