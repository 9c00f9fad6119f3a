#include "bmtsp/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace bmtsp {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

// Splits "KEY : VALUE", "KEY: VALUE" or "KEY VALUE".
std::pair<std::string, std::string> split_key(const std::string& line) {
    const std::size_t colon = line.find(':');
    if (colon != std::string::npos) {
        return {upper(trim(std::string_view(line).substr(0, colon))),
                trim(std::string_view(line).substr(colon + 1))};
    }
    const std::size_t space = line.find_first_of(" \t");
    if (space == std::string::npos) return {upper(line), ""};
    return {upper(line.substr(0, space)), trim(std::string_view(line).substr(space + 1))};
}

int parse_int(const std::string& text, int line, const char* what) {
    int value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(line, std::string("expected integer for ") + what + ", got '" + text + "'");
    }
    return value;
}

bool parse_double(const std::string& token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path.string());
    return in;
}

}  // namespace

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

TspData parse_tsp(std::istream& in) {
    TspData data;
    std::optional<int> dimension;
    int dimension_line = 0;
    int line_no = 0;
    int coord_line = 0;
    bool in_coords = false;
    std::vector<bool> seen_ids;
    std::string raw;

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (in_coords) {
            std::istringstream fields(line);
            std::string id_text, x_text, y_text, extra;
            fields >> id_text >> x_text >> y_text;
            const bool numeric_start = std::isdigit(static_cast<unsigned char>(id_text[0])) != 0;
            if (!numeric_start) {
                in_coords = false;  // next section or EOF
            } else {
                City c;
                c.id = parse_int(id_text, line_no, "node id");
                if (x_text.empty() || y_text.empty() || !parse_double(x_text, c.x) ||
                    !parse_double(y_text, c.y) || (fields >> extra)) {
                    throw ParseError(line_no, "malformed coordinate line '" + line + "'");
                }
                if (c.id < 1 || c.id > *dimension) {
                    throw ParseError(line_no, "node id " + std::to_string(c.id) +
                                                  " outside 1.." + std::to_string(*dimension));
                }
                if (seen_ids[static_cast<std::size_t>(c.id)]) {
                    throw ParseError(line_no, "duplicate node id " + std::to_string(c.id));
                }
                seen_ids[static_cast<std::size_t>(c.id)] = true;
                data.cities.push_back(c);
                continue;
            }
        }

        auto [key, value] = split_key(line);
        if (key == "EOF") break;
        if (key == "NAME") {
            data.name = value;
        } else if (key == "COMMENT") {
            data.comment = value;
        } else if (key == "TYPE") {
            const std::string t = upper(value);
            if (t != "TSP" && t != "BMTSP" && t != "MTSP") {
                throw ParseError(line_no, "unsupported TYPE '" + value + "'");
            }
        } else if (key == "DIMENSION") {
            dimension = parse_int(value, line_no, "DIMENSION");
            dimension_line = line_no;
            if (*dimension < 2) throw ParseError(line_no, "DIMENSION must be at least 2");
        } else if (key == "EDGE_WEIGHT_TYPE") {
            if (upper(value) != "EUC_2D") {
                throw ParseError(line_no, "EDGE_WEIGHT_TYPE must be EUC_2D, got '" + value + "'");
            }
        } else if (key == "SALESMEN") {
            data.salesmen = parse_int(value, line_no, "SALESMEN");
        } else if (key == "MIN_CITIES") {
            data.min_cities = parse_int(value, line_no, "MIN_CITIES");
        } else if (key == "MAX_CITIES") {
            data.max_cities = parse_int(value, line_no, "MAX_CITIES");
        } else if (key == "NODE_COORD_SECTION") {
            if (!dimension) throw ParseError(line_no, "NODE_COORD_SECTION before DIMENSION");
            if (coord_line != 0) throw ParseError(line_no, "repeated NODE_COORD_SECTION");
            in_coords = true;
            coord_line = line_no;
            seen_ids.assign(static_cast<std::size_t>(*dimension) + 1, false);
        } else if (key == "EDGE_WEIGHT_SECTION" || key == "DEMAND_SECTION" ||
                   key == "DEPOT_SECTION" || key == "EDGE_DATA_SECTION" ||
                   key == "FIXED_EDGES_SECTION" || key == "TOUR_SECTION") {
            throw ParseError(line_no, "unsupported section " + key);
        }
        // Other keys (DISPLAY_DATA_TYPE, ...) are ignored.
    }

    if (!dimension) throw ParseError(line_no, "missing DIMENSION");
    if (coord_line == 0) throw ParseError(line_no, "missing NODE_COORD_SECTION");
    if (static_cast<int>(data.cities.size()) != *dimension) {
        throw ParseError(coord_line, "coordinate section has " + std::to_string(data.cities.size()) +
                                         " nodes but DIMENSION (line " +
                                         std::to_string(dimension_line) + ") is " +
                                         std::to_string(*dimension));
    }
    std::sort(data.cities.begin(), data.cities.end(),
              [](const City& a, const City& b) { return a.id < b.id; });
    return data;
}

Instance parse_instance(std::istream& in, const BoundOverrides& overrides,
                        DistanceConvention convention) {
    TspData data = parse_tsp(in);
    const auto salesmen = overrides.salesmen ? overrides.salesmen : data.salesmen;
    const auto min_cities = overrides.min_cities ? overrides.min_cities : data.min_cities;
    const auto max_cities = overrides.max_cities ? overrides.max_cities : data.max_cities;
    std::string missing;
    if (!salesmen) missing += " SALESMEN";
    if (!min_cities) missing += " MIN_CITIES";
    if (!max_cities) missing += " MAX_CITIES";
    if (!missing.empty()) {
        throw ParseError(1, "missing BMTSP parameter(s):" + missing +
                                " (add them to the header or pass overrides)");
    }
    try {
        return Instance(data.name, std::move(data.cities), *salesmen, *min_cities, *max_cities,
                        convention);
    } catch (const std::invalid_argument& e) {
        throw ParseError(1, e.what());
    }
}

Instance load_instance(const std::filesystem::path& path, const BoundOverrides& overrides,
                       DistanceConvention convention) {
    std::ifstream in = open_input(path);
    return parse_instance(in, overrides, convention);
}

TspData load_tsp(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    return parse_tsp(in);
}

std::string write_instance(const Instance& inst) {
    std::ostringstream out;
    out << "NAME : " << inst.name() << '\n'
        << "TYPE : TSP\n"
        << "DIMENSION : " << inst.cities().size() << '\n'
        << "EDGE_WEIGHT_TYPE : EUC_2D\n"
        << "SALESMEN : " << inst.salesmen() << '\n'
        << "MIN_CITIES : " << inst.min_cities() << '\n'
        << "MAX_CITIES : " << inst.max_cities() << '\n'
        << "NODE_COORD_SECTION\n";
    for (const City& c : inst.cities()) {
        out << c.id << ' ' << format_shortest(c.x) << ' ' << format_shortest(c.y) << '\n';
    }
    out << "EOF\n";
    return out.str();
}

GeneratedBounds generation_bounds(int customers, int max_cities, bool count_includes_depot) {
    if (max_cities < 1) throw std::invalid_argument("m_max must be positive");
    const long long n = customers + (count_includes_depot ? 1 : 0);
    // Integer forms of ceil(1.3 n / m_max) and ceil(0.6 m_max).
    const long long k = (13 * n + 10LL * max_cities - 1) / (10LL * max_cities);
    const long long m_min = (6LL * max_cities + 9) / 10;
    return {static_cast<int>(k), static_cast<int>(m_min), max_cities};
}

Instance generate_instance(const TspData& tsp, int max_cities, bool count_includes_depot) {
    const int n = tsp.customer_count();
    if (n < 2) throw std::invalid_argument("generation needs at least 2 non-depot cities");
    const GeneratedBounds b = generation_bounds(n, max_cities, count_includes_depot);
    const std::string name = tsp.name + "_" + std::to_string(b.salesmen);
    try {
        return Instance(name, tsp.cities, b.salesmen, b.min_cities, b.max_cities);
    } catch (const InfeasibleInstance& e) {
        throw InfeasibleInstance(name + " (m_max=" + std::to_string(max_cities) + "): " + e.what(),
                                 e.lower_product(), e.upper_product(), e.customers());
    }
}

InvalidSolution::InvalidSolution(ValidationReport report)
    : std::runtime_error("invalid solution: " + report.to_string()), report_(std::move(report)) {}

std::string format_shortest(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string format_fixed2(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", value);
    return buf;
}

std::string write_solution(const Solution& s, const Instance& inst, std::optional<std::uint64_t> seed) {
    ValidationReport report = validate(s, inst);
    if (!report.ok()) throw InvalidSolution(std::move(report));

    std::ostringstream out;
    out << "NAME: " << inst.name() << " SALESMEN: " << inst.salesmen() << " SEED: ";
    if (seed) out << *seed; else out << "none";
    out << '\n';
    out << "TOTAL_COST: " << format_fixed2(s.total_cost) << " # " << format_shortest(s.total_cost)
        << '\n';
    for (std::size_t t = 0; t < s.tours.size(); ++t) {
        const double cost = tour_cost(s.tours[t], inst);
        out << "TOUR " << t + 1 << ": " << inst.depot();
        for (CityId id : s.tours[t].cities) out << ' ' << id;
        out << ' ' << inst.depot() << " COST: " << format_fixed2(cost) << " # "
            << format_shortest(cost) << '\n';
    }
    return out.str();
}

namespace {

double parse_cost_field(std::istringstream& fields, int line) {
    std::string rounded, hash, full;
    fields >> rounded >> hash >> full;
    double r = 0.0;
    double f = 0.0;
    if (!parse_double(rounded, r) || hash != "#" || !parse_double(full, f)) {
        throw ParseError(line, "malformed cost field");
    }
    if (std::abs(r - f) > 0.005 + 1e-9 * std::abs(f)) {
        throw ParseError(line, "rounded and full-precision costs disagree");
    }
    return f;
}

}  // namespace

SolutionFile parse_solution(std::istream& in) {
    SolutionFile file;
    std::string raw;
    int line_no = 0;
    bool have_header = false;
    bool have_total = false;

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string tag;
        fields >> tag;
        if (!have_header) {
            std::string salesmen_tag, salesmen, seed_tag, seed;
            fields >> file.instance_name >> salesmen_tag >> salesmen >> seed_tag >> seed;
            if (tag != "NAME:" || salesmen_tag != "SALESMEN:" || seed_tag != "SEED:") {
                throw ParseError(line_no, "expected 'NAME: <name> SALESMEN: <k> SEED: <seed>'");
            }
            file.salesmen = parse_int(salesmen, line_no, "SALESMEN");
            if (seed != "none") {
                std::uint64_t v = 0;
                auto [ptr, ec] = std::from_chars(seed.data(), seed.data() + seed.size(), v);
                if (ec != std::errc() || ptr != seed.data() + seed.size()) {
                    throw ParseError(line_no, "malformed SEED '" + seed + "'");
                }
                file.seed = v;
            }
            have_header = true;
        } else if (!have_total) {
            if (tag != "TOTAL_COST:") throw ParseError(line_no, "expected TOTAL_COST line");
            file.solution.total_cost = parse_cost_field(fields, line_no);
            have_total = true;
        } else {
            std::string index_text;
            fields >> index_text;
            if (tag != "TOUR" || index_text.empty() || index_text.back() != ':') {
                throw ParseError(line_no, "expected 'TOUR <i>: ...'");
            }
            index_text.pop_back();
            const int index = parse_int(index_text, line_no, "tour index");
            if (index != static_cast<int>(file.solution.tours.size()) + 1) {
                throw ParseError(line_no, "tour index out of sequence");
            }
            std::vector<CityId> walk;
            std::string token;
            while (fields >> token && token != "COST:") {
                walk.push_back(parse_int(token, line_no, "city id"));
            }
            if (token != "COST:") throw ParseError(line_no, "missing COST field");
            if (walk.size() < 2 || walk.front() != kDepot || walk.back() != kDepot) {
                throw ParseError(line_no, "tour must begin and end with the depot id");
            }
            file.solution.tours.push_back(Tour{{walk.begin() + 1, walk.end() - 1}});
            file.tour_costs.push_back(parse_cost_field(fields, line_no));
        }
    }
    if (!have_header || !have_total) throw ParseError(line_no, "truncated solution file");
    if (static_cast<int>(file.solution.tours.size()) != file.salesmen) {
        throw ParseError(line_no, "expected " + std::to_string(file.salesmen) + " tours, found " +
                                      std::to_string(file.solution.tours.size()));
    }
    return file;
}

SolutionFile load_solution(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    return parse_solution(in);
}

}  // namespace bmtsp
