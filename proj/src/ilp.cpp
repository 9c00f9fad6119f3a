#include "bmtsp/ilp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <sstream>

namespace bmtsp {

namespace {

constexpr double kFeasibilityTolerance = 1e-9;
constexpr std::size_t kLineWidth = 78;

std::string number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string x_name(CityId i, CityId j) {
    return "x_" + std::to_string(i) + "_" + std::to_string(j);
}

std::string u_name(CityId i) { return "u_" + std::to_string(i); }

const char* sense_text(Sense s) {
    switch (s) {
        case Sense::le: return "<=";
        case Sense::ge: return ">=";
        case Sense::eq: return "=";
    }
    return "?";
}

// Accumulates whitespace-separated tokens into indented, wrapped lines.
class LineWriter {
public:
    explicit LineWriter(std::string& out) : out_(out) {}

    void token(const std::string& t) {
        if (line_.empty()) {
            line_ = " " + t;
        } else if (line_.size() + 1 + t.size() > kLineWidth) {
            flush();
            line_ = "   " + t;
        } else {
            line_ += ' ';
            line_ += t;
        }
    }

    void flush() {
        if (line_.empty()) return;
        out_ += line_;
        out_ += '\n';
        line_.clear();
    }

private:
    std::string& out_;
    std::string line_;
};

void write_terms(LineWriter& w, const IlpModel& m, const std::vector<Term>& terms) {
    bool first = true;
    for (const Term& t : terms) {
        if (t.coef < 0) {
            w.token("-");
            w.token(number(-t.coef));
        } else {
            if (!first) w.token("+");
            w.token(number(t.coef));
        }
        w.token(m.variables[static_cast<std::size_t>(t.var)].name);
        first = false;
    }
}

}  // namespace

int IlpModel::x_index(CityId i, CityId j) const {
    if (i < 1 || j < 1 || i > nodes || j > nodes || i == j) {
        throw ContractViolation("x index out of range");
    }
    return (i - 1) * (nodes - 1) + (j - 1) - (j > i ? 1 : 0);
}

int IlpModel::u_index(CityId i) const {
    if (i < 2 || i > nodes) throw ContractViolation("u index out of range");
    return nodes * (nodes - 1) + (i - 2);
}

int IlpModel::binary_count() const {
    return static_cast<int>(std::count_if(variables.begin(), variables.end(),
                                          [](const Variable& v) { return v.type == VarType::binary; }));
}

int IlpModel::integer_count() const {
    return static_cast<int>(variables.size()) - binary_count();
}

int IlpModel::count(int equation) const {
    return static_cast<int>(std::count_if(constraints.begin(), constraints.end(),
                                          [&](const Constraint& c) { return c.equation == equation; }));
}

IlpModel build_model(const Instance& inst) {
    check_feasible(inst.customer_count(), inst.salesmen(), inst.min_cities(), inst.max_cities());
    IlpModel m;
    m.name = inst.name();
    m.nodes = static_cast<int>(inst.cities().size());
    m.salesmen = inst.salesmen();
    m.min_cities = inst.min_cities();
    m.max_cities = inst.max_cities();
    const int n = m.nodes;
    const double big = m.max_cities;
    const double low = m.min_cities;

    for (CityId i = 1; i <= n; ++i) {
        for (CityId j = 1; j <= n; ++j) {
            if (i == j) continue;
            m.variables.push_back({x_name(i, j), VarType::binary, 0.0, 1.0});
            m.objective.push_back({m.x_index(i, j), inst.distance(i, j)});
        }
    }
    // A city that closes a full tour sits at position max_cities.
    for (CityId i = 2; i <= n; ++i) {
        m.variables.push_back({u_name(i), VarType::integer, 1.0, big});
    }

    auto x = [&](CityId i, CityId j) { return m.x_index(i, j); };
    auto u = [&](CityId i) { return m.u_index(i); };
    auto add = [&](std::string name, int eq, std::vector<Term> terms, Sense sense, double rhs) {
        m.constraints.push_back({std::move(name), eq, std::move(terms), sense, rhs});
    };

    std::vector<Term> out_depot;
    std::vector<Term> in_depot;
    for (CityId j = 2; j <= n; ++j) out_depot.push_back({x(1, j), 1.0});
    for (CityId i = 2; i <= n; ++i) in_depot.push_back({x(i, 1), 1.0});
    add("eq5", 5, out_depot, Sense::eq, m.salesmen);
    add("eq6", 6, in_depot, Sense::eq, m.salesmen);

    for (CityId j = 2; j <= n; ++j) {
        std::vector<Term> terms;
        for (CityId i = 1; i <= n; ++i) {
            if (i != j) terms.push_back({x(i, j), 1.0});
        }
        add("eq7_" + std::to_string(j), 7, std::move(terms), Sense::eq, 1.0);
    }
    for (CityId i = 2; i <= n; ++i) {
        std::vector<Term> terms;
        for (CityId j = 1; j <= n; ++j) {
            if (i != j) terms.push_back({x(i, j), 1.0});
        }
        add("eq8_" + std::to_string(i), 8, std::move(terms), Sense::eq, 1.0);
    }
    for (CityId i = 2; i <= n; ++i) {
        add("eq9_" + std::to_string(i), 9, {{u(i), 1.0}, {x(1, i), big - 2}, {x(i, 1), -1.0}},
            Sense::le, big - 1);
    }
    for (CityId i = 2; i <= n; ++i) {
        add("eq10_" + std::to_string(i), 10, {{u(i), 1.0}, {x(1, i), 1.0}, {x(i, 1), 2 - low}},
            Sense::ge, 2.0);
    }
    for (CityId i = 2; i <= n; ++i) {
        add("eq11_" + std::to_string(i), 11, {{x(1, i), 1.0}, {x(i, 1), 1.0}}, Sense::le, 1.0);
    }
    for (CityId i = 2; i <= n; ++i) {
        for (CityId j = 2; j <= n; ++j) {
            if (i == j) continue;
            add("eq12_" + std::to_string(i) + "_" + std::to_string(j), 12,
                {{u(i), 1.0}, {u(j), -1.0}, {x(i, j), big}, {x(j, i), big - 2}}, Sense::le, big - 1);
        }
    }
    return m;
}

std::string export_lp(const IlpModel& m) {
    std::string out;
    out += "\\ bmtsp model " + m.name + " nodes=" + std::to_string(m.nodes) +
           " salesmen=" + std::to_string(m.salesmen) + " min=" + std::to_string(m.min_cities) +
           " max=" + std::to_string(m.max_cities) + "\n";
    LineWriter w(out);

    out += "Minimize\n";
    w.token("obj:");
    write_terms(w, m, m.objective);
    w.flush();

    out += "Subject To\n";
    for (const Constraint& c : m.constraints) {
        w.token(c.name + ":");
        write_terms(w, m, c.terms);
        w.token(sense_text(c.sense));
        w.token(number(c.rhs));
        w.flush();
    }

    out += "Bounds\n";
    for (const Variable& v : m.variables) {
        if (v.type == VarType::binary) continue;
        w.token(number(v.lower));
        w.token("<=");
        w.token(v.name);
        w.token("<=");
        w.token(number(v.upper));
        w.flush();
    }

    out += "Binary\n";
    for (const Variable& v : m.variables) {
        if (v.type == VarType::binary) w.token(v.name);
    }
    w.flush();
    out += "General\n";
    for (const Variable& v : m.variables) {
        if (v.type == VarType::integer) w.token(v.name);
    }
    w.flush();
    out += "End\n";
    return out;
}

LpSyntaxError::LpSyntaxError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

enum class Section { none, objective, constraints, bounds, binary, general, end };

struct Token {
    std::string text;
    int line;
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::optional<Section> section_keyword(const std::string& line) {
    const std::string l = lower(line);
    if (l == "minimize" || l == "minimum" || l == "min") return Section::objective;
    if (l == "subject to" || l == "such that" || l == "st" || l == "s.t.") return Section::constraints;
    if (l == "bounds" || l == "bound") return Section::bounds;
    if (l == "binary" || l == "binaries" || l == "bin") return Section::binary;
    if (l == "general" || l == "generals" || l == "gen") return Section::general;
    if (l == "end") return Section::end;
    return std::nullopt;
}

std::optional<double> parse_number(const std::string& s) {
    double value = 0.0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct RawTerm {
    std::string var;
    double coef;
    int line;
};

struct RawRow {
    std::string name;
    int line;
    std::vector<RawTerm> terms;
    std::optional<Sense> sense;
    double rhs = 0.0;
};

// Splits a section's tokens into labelled rows of signed terms.
std::vector<RawRow> parse_rows(const std::vector<Token>& tokens, bool with_rhs) {
    std::vector<RawRow> rows;
    double sign = 1.0;
    double coef = 1.0;
    bool has_coef = false;
    bool expect_rhs = false;
    for (const Token& t : tokens) {
        if (t.text.size() > 1 && t.text.back() == ':') {
            if (!rows.empty() && with_rhs && !rows.back().sense) {
                throw LpSyntaxError(t.line, "row '" + rows.back().name + "' has no relation");
            }
            rows.push_back({t.text.substr(0, t.text.size() - 1), t.line, {}, std::nullopt, 0.0});
            sign = 1.0;
            coef = 1.0;
            has_coef = false;
            continue;
        }
        if (rows.empty()) throw LpSyntaxError(t.line, "expected a row label, got '" + t.text + "'");
        RawRow& row = rows.back();
        if (expect_rhs) {
            const auto value = parse_number(t.text);
            if (!value) throw LpSyntaxError(t.line, "expected a right-hand side, got '" + t.text + "'");
            row.rhs = sign * *value;
            sign = 1.0;
            expect_rhs = false;
            continue;
        }
        if (row.sense) throw LpSyntaxError(t.line, "unexpected '" + t.text + "' after right-hand side");
        if (t.text == "+" || t.text == "-") {
            if (has_coef) throw LpSyntaxError(t.line, "dangling coefficient");
            if (t.text == "-") sign = -sign;
            continue;
        }
        if (with_rhs && (t.text == "<=" || t.text == "=<" || t.text == "<" || t.text == ">=" ||
                         t.text == "=>" || t.text == ">" || t.text == "=")) {
            if (has_coef) throw LpSyntaxError(t.line, "dangling coefficient");
            row.sense = t.text == "=" ? Sense::eq : (t.text.find('<') != std::string::npos ? Sense::le : Sense::ge);
            sign = 1.0;
            expect_rhs = true;
            continue;
        }
        if (const auto value = parse_number(t.text)) {
            if (has_coef) throw LpSyntaxError(t.line, "two consecutive coefficients");
            coef = *value;
            has_coef = true;
            continue;
        }
        row.terms.push_back({t.text, sign * coef, t.line});
        sign = 1.0;
        coef = 1.0;
        has_coef = false;
    }
    if (expect_rhs) throw LpSyntaxError(tokens.back().line, "missing right-hand side");
    if (has_coef && !tokens.empty()) throw LpSyntaxError(tokens.back().line, "dangling coefficient");
    if (with_rhs && !rows.empty() && !rows.back().sense) {
        throw LpSyntaxError(rows.back().line, "row '" + rows.back().name + "' has no relation");
    }
    return rows;
}

int equation_tag(const std::string& name) {
    if (name.rfind("eq", 0) != 0) return 0;
    int tag = 0;
    const char* first = name.data() + 2;
    const char* last = name.data() + name.size();
    const auto [ptr, ec] = std::from_chars(first, last, tag);
    if (ec != std::errc{} || (ptr != last && *ptr != '_')) return 0;
    return tag;
}

void parse_header(const std::string& comment, IlpModel& m) {
    std::istringstream in(comment);
    std::string word;
    in >> word;
    if (word != "bmtsp") return;
    in >> word;
    if (word != "model") return;
    in >> m.name;
    while (in >> word) {
        const auto eq = word.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = word.substr(0, eq);
        const int value = std::stoi(word.substr(eq + 1));
        if (key == "nodes") m.nodes = value;
        if (key == "salesmen") m.salesmen = value;
        if (key == "min") m.min_cities = value;
        if (key == "max") m.max_cities = value;
    }
}

}  // namespace

IlpModel parse_lp(std::istream& in) {
    IlpModel m;
    std::map<Section, std::vector<Token>> tokens;
    Section section = Section::none;
    std::string raw;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string text = raw;
        if (const auto c = text.find('\\'); c != std::string::npos) {
            if (!header_seen && section == Section::none) {
                parse_header(trim(text.substr(c + 1)), m);
                header_seen = !m.name.empty();
            }
            text.erase(c);
        }
        text = trim(text);
        if (text.empty()) continue;
        if (const auto next = section_keyword(text)) {
            if (section == Section::end) throw LpSyntaxError(line_no, "content after End");
            section = *next;
            continue;
        }
        if (lower(text) == "maximize" || lower(text) == "maximum" || lower(text) == "max") {
            throw LpSyntaxError(line_no, "only minimisation models are supported");
        }
        if (section == Section::none) throw LpSyntaxError(line_no, "text before the objective section");
        if (section == Section::end) throw LpSyntaxError(line_no, "content after End");
        std::istringstream words(text);
        std::string word;
        while (words >> word) {
            // "name:term" written without a space.
            if (const auto colon = word.find(':'); colon != std::string::npos && colon + 1 < word.size()) {
                tokens[section].push_back({word.substr(0, colon + 1), line_no});
                word.erase(0, colon + 1);
            }
            tokens[section].push_back({word, line_no});
        }
    }
    if (section != Section::end) throw LpSyntaxError(line_no, "missing End");

    // Declared variables, in declaration order: binaries first, then generals.
    std::map<std::string, int> index;
    for (const auto& [kind, type] : {std::pair{Section::binary, VarType::binary},
                                     std::pair{Section::general, VarType::integer}}) {
        for (const Token& t : tokens[kind]) {
            if (index.count(t.text)) throw LpSyntaxError(t.line, "variable '" + t.text + "' declared twice");
            index[t.text] = static_cast<int>(m.variables.size());
            m.variables.push_back({t.text, type, 0.0, type == VarType::binary ? 1.0 : 0.0});
            if (type == VarType::integer) m.variables.back().upper = HUGE_VAL;
        }
    }
    auto lookup = [&](const std::string& name, int line) {
        const auto it = index.find(name);
        if (it == index.end()) throw LpSyntaxError(line, "undeclared variable '" + name + "'");
        return it->second;
    };
    auto to_terms = [&](const std::vector<RawTerm>& raw_terms) {
        std::vector<Term> terms;
        for (const RawTerm& t : raw_terms) terms.push_back({lookup(t.var, t.line), t.coef});
        return terms;
    };

    const auto objective = parse_rows(tokens[Section::objective], false);
    if (objective.size() > 1) throw LpSyntaxError(objective[1].line, "more than one objective");
    if (!objective.empty()) m.objective = to_terms(objective.front().terms);

    for (const RawRow& row : parse_rows(tokens[Section::constraints], true)) {
        m.constraints.push_back({row.name, equation_tag(row.name), to_terms(row.terms), *row.sense, row.rhs});
    }

    // Bounds: "l <= v <= u", "v >= l", "v <= u", "v = c".
    const auto& b = tokens[Section::bounds];
    for (std::size_t k = 0; k < b.size();) {
        auto at = [&](std::size_t off) -> const Token& {
            if (k + off >= b.size()) throw LpSyntaxError(b.back().line, "truncated bound");
            return b[k + off];
        };
        if (const auto low = parse_number(at(0).text)) {
            if (at(1).text != "<=") throw LpSyntaxError(at(1).line, "expected '<=' in bound");
            Variable& v = m.variables[static_cast<std::size_t>(lookup(at(2).text, at(2).line))];
            v.lower = *low;
            if (k + 3 < b.size() && b[k + 3].text == "<=") {
                const auto up = parse_number(at(4).text);
                if (!up) throw LpSyntaxError(at(4).line, "expected a number");
                v.upper = *up;
                k += 5;
            } else {
                k += 3;
            }
            continue;
        }
        Variable& v = m.variables[static_cast<std::size_t>(lookup(at(0).text, at(0).line))];
        const std::string& op = at(1).text;
        const auto value = parse_number(at(2).text);
        if (!value) throw LpSyntaxError(at(2).line, "expected a number");
        if (op == "<=") v.upper = *value;
        else if (op == ">=") v.lower = *value;
        else if (op == "=") v.lower = v.upper = *value;
        else throw LpSyntaxError(at(1).line, "unknown bound relation '" + op + "'");
        k += 3;
    }

    if (m.nodes == 0) m.nodes = m.integer_count() + 1;
    return m;
}

IlpModel parse_lp(const std::string& text) {
    std::istringstream in(text);
    return parse_lp(in);
}

std::vector<double> encode_solution(const IlpModel& m, const Solution& s) {
    std::vector<double> values(m.variables.size(), 0.0);
    std::vector<int> seen(static_cast<std::size_t>(m.nodes) + 1, 0);
    for (const Tour& t : s.tours) {
        CityId prev = kDepot;
        int position = 0;
        for (CityId c : t.cities) {
            if (c < 2 || c > m.nodes) {
                throw EncodingError("city " + std::to_string(c) + " is not a customer of model " + m.name);
            }
            if (seen[static_cast<std::size_t>(c)]++ > 0) {
                throw EncodingError("city " + std::to_string(c) + " appears more than once");
            }
            values[static_cast<std::size_t>(m.x_index(prev, c))] = 1.0;
            values[static_cast<std::size_t>(m.u_index(c))] = ++position;
            prev = c;
        }
        if (prev != kDepot) values[static_cast<std::size_t>(m.x_index(prev, kDepot))] = 1.0;
    }
    for (CityId c = 2; c <= m.nodes; ++c) {
        if (seen[static_cast<std::size_t>(c)] == 0) {
            throw EncodingError("city " + std::to_string(c) + " is not visited");
        }
    }
    return values;
}

int IlpEvaluation::count(int equation) const {
    return static_cast<int>(std::count_if(violations.begin(), violations.end(),
                                          [&](const ConstraintViolation& v) { return v.equation == equation; }));
}

std::string IlpEvaluation::to_string() const {
    std::ostringstream out;
    out << "objective " << number(objective) << ", " << violations.size() << " violation(s)\n";
    for (const auto& v : violations) {
        out << "  eq" << v.equation << ' ' << v.constraint << ": lhs " << number(v.lhs) << ", rhs "
            << number(v.rhs) << '\n';
    }
    return out.str();
}

IlpEvaluation check_assignment(const IlpModel& m, std::span<const double> values) {
    if (values.size() != m.variables.size()) {
        throw ContractViolation("assignment has " + std::to_string(values.size()) + " values, model has " +
                                std::to_string(m.variables.size()) + " variables");
    }
    IlpEvaluation report;
    for (const Term& t : m.objective) report.objective += t.coef * values[static_cast<std::size_t>(t.var)];
    for (const Constraint& c : m.constraints) {
        double lhs = 0.0;
        for (const Term& t : c.terms) lhs += t.coef * values[static_cast<std::size_t>(t.var)];
        const bool ok = c.sense == Sense::le   ? lhs <= c.rhs + kFeasibilityTolerance
                        : c.sense == Sense::ge ? lhs >= c.rhs - kFeasibilityTolerance
                                               : std::abs(lhs - c.rhs) <= kFeasibilityTolerance;
        if (!ok) report.violations.push_back({c.equation, c.name, lhs, c.rhs});
    }
    for (std::size_t k = 0; k < m.variables.size(); ++k) {
        const Variable& v = m.variables[k];
        const double value = values[k];
        const bool integral = std::abs(value - std::round(value)) <= kFeasibilityTolerance;
        if (!integral || value < v.lower - kFeasibilityTolerance || value > v.upper + kFeasibilityTolerance) {
            report.violations.push_back({13, v.name, value, value < v.lower ? v.lower : v.upper});
        }
    }
    return report;
}

IlpEvaluation evaluate(const IlpModel& m, const Solution& s) {
    const auto values = encode_solution(m, s);
    return check_assignment(m, values);
}

}  // namespace bmtsp
