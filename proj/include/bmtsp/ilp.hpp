#pragma once

/// @file ilp.hpp
/// Two-index MTZ-style ILP for the bounded multiple TSP: binaries x_i_j for
/// every ordered pair of distinct nodes, integer position counters u_i for
/// the non-depot cities, and the constraint families tagged 5..12 below.
///
///   5   sum_j x_1_j = k                       depot out-degree
///   6   sum_i x_i_1 = k                       depot in-degree
///   7   sum_i x_i_j = 1        (j != 1)       in-degree
///   8   sum_j x_i_j = 1        (i != 1)       out-degree
///   9   u_i + (M-2) x_1_i - x_i_1 <= M-1      upper size limit
///  10   u_i + x_1_i + (2-L) x_i_1 >= 2        lower size limit
///  11   x_1_i + x_i_1 <= 1                    no single-city tours
///  12   u_i - u_j + M x_i_j + (M-2) x_j_i <= M-1   (i != j, both != 1)
///
/// with M = max_cities, L = min_cities. Tag 13 denotes variable domains
/// (binary / integer bounds) in evaluation reports.

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bmtsp/model.hpp"

namespace bmtsp {

enum class VarType { binary, integer };
enum class Sense { le, ge, eq };

struct Variable {
    std::string name;
    VarType type = VarType::binary;
    double lower = 0.0;
    double upper = 1.0;

    friend bool operator==(const Variable&, const Variable&) = default;
};

struct Term {
    int var = 0;
    double coef = 0.0;

    friend bool operator==(const Term&, const Term&) = default;
};

struct Constraint {
    std::string name;
    int equation = 0;
    std::vector<Term> terms;
    Sense sense = Sense::le;
    double rhs = 0.0;

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct IlpModel {
    std::string name;
    int nodes = 0;  // depot plus customers, ids 1..nodes
    int salesmen = 0;
    int min_cities = 0;
    int max_cities = 0;
    std::vector<Variable> variables;
    std::vector<Term> objective;
    std::vector<Constraint> constraints;

    int customers() const noexcept { return nodes - 1; }
    /// Index of x_i_j (i != j) and of u_i (i >= 2) in `variables`.
    int x_index(CityId i, CityId j) const;
    int u_index(CityId i) const;
    int binary_count() const;
    int integer_count() const;
    int count(int equation) const;

    friend bool operator==(const IlpModel&, const IlpModel&) = default;
};

/// Throws InfeasibleInstance for an infeasible instance.
IlpModel build_model(const Instance& inst);

/// CPLEX LP text. Objective weights are written with 17 significant digits
/// and long rows are wrapped; the output depends only on the model.
std::string export_lp(const IlpModel& m);

class LpSyntaxError : public std::runtime_error {
public:
    LpSyntaxError(int line, const std::string& message);
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Reader for the subset of the LP grammar that export_lp emits (plus
/// free-form whitespace and comments). Constraint tags are recovered from
/// the `eqN` name prefix and the model header from the leading comment.
IlpModel parse_lp(std::istream& in);
IlpModel parse_lp(const std::string& text);

class EncodingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Variable values for `s`: x_i_j = 1 along every tour including the depot
/// legs, u_i = 1-based position of i within its tour. Throws EncodingError
/// unless every customer appears exactly once and nothing else appears.
std::vector<double> encode_solution(const IlpModel& m, const Solution& s);

struct ConstraintViolation {
    int equation = 0;
    std::string constraint;  // row name, or the variable name for tag 13
    double lhs = 0.0;
    double rhs = 0.0;
};

struct IlpEvaluation {
    double objective = 0.0;
    std::vector<ConstraintViolation> violations;

    bool feasible() const noexcept { return violations.empty(); }
    int count(int equation) const;
    std::string to_string() const;
};

/// Checks every row and variable domain against `values`.
IlpEvaluation check_assignment(const IlpModel& m, std::span<const double> values);

IlpEvaluation evaluate(const IlpModel& m, const Solution& s);

}  // namespace bmtsp
