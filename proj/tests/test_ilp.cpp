#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "bmtsp/ilp.hpp"
#include "bmtsp/io.hpp"
#include "bmtsp/oracle.hpp"
#include "support.hpp"

using namespace bmtsp;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

Solution make(const Instance& inst, std::vector<std::vector<CityId>> tours) {
    Solution s;
    for (auto& t : tours) s.tours.push_back(Tour{std::move(t)});
    refresh_cost(s, inst);
    return s;
}

}  // namespace

TEST(BuildModel, CountsForThreeCustomers) {
    const Instance inst = support::random_instance(1, 3, 1, 1, 3);
    const IlpModel m = build_model(inst);
    EXPECT_EQ(m.binary_count(), 12);
    EXPECT_EQ(m.integer_count(), 3);
    EXPECT_EQ(m.count(5), 1);
    EXPECT_EQ(m.count(6), 1);
    for (int eq : {7, 8, 9, 10, 11}) EXPECT_EQ(m.count(eq), 3) << eq;
    EXPECT_EQ(m.count(12), 6);
}

TEST(BuildModel, CountsScaleWithN) {
    for (int n : {2, 5, 9}) {
        const IlpModel m = build_model(support::random_instance(2, n, 1, 1, n));
        EXPECT_EQ(m.binary_count(), (n + 1) * n);
        EXPECT_EQ(m.integer_count(), n);
        EXPECT_EQ(m.count(12), n * (n - 1));
        EXPECT_EQ(static_cast<int>(m.constraints.size()), 2 + 5 * n + n * (n - 1));
    }
}

TEST(BuildModel, IndexLayout) {
    const IlpModel m = build_model(support::random_instance(3, 4, 1, 1, 4));
    EXPECT_EQ(m.variables[static_cast<std::size_t>(m.x_index(1, 2))].name, "x_1_2");
    EXPECT_EQ(m.variables[static_cast<std::size_t>(m.x_index(3, 1))].name, "x_3_1");
    EXPECT_EQ(m.variables[static_cast<std::size_t>(m.x_index(5, 4))].name, "x_5_4");
    EXPECT_EQ(m.variables[static_cast<std::size_t>(m.u_index(5))].name, "u_5");
    EXPECT_THROW(m.x_index(2, 2), ContractViolation);
    EXPECT_THROW(m.u_index(1), ContractViolation);
}

TEST(BuildModel, ObjectiveWeightsAreDistances) {
    const Instance inst = support::random_instance(4, 4, 1, 1, 4);
    const IlpModel m = build_model(inst);
    for (const Term& t : m.objective) {
        const std::string& name = m.variables[static_cast<std::size_t>(t.var)].name;
        int i = 0;
        int j = 0;
        ASSERT_EQ(std::sscanf(name.c_str(), "x_%d_%d", &i, &j), 2);
        EXPECT_EQ(t.coef, support::ref_distance(inst, i, j));
    }
}

TEST(Evaluate, TwoCustomerCycleBothDirections) {
    const Instance inst = load_instance(support::fixture("micro2.bmtsp"));
    const IlpModel m = build_model(inst);
    for (auto tour : {std::vector<CityId>{2, 3}, std::vector<CityId>{3, 2}}) {
        const IlpEvaluation e = evaluate(m, make(inst, {tour}));
        EXPECT_TRUE(e.feasible()) << e.to_string();
        EXPECT_DOUBLE_EQ(e.objective, 12.0);
    }
}

TEST(Evaluate, OversizedTourViolatesUpperLimit) {
    const Instance inst = support::random_instance(5, 6, 2, 2, 3);
    const IlpModel m = build_model(inst);
    const IlpEvaluation e = evaluate(m, make(inst, {{2, 3, 4, 5}, {6, 7}}));
    EXPECT_GT(e.count(9), 0) << e.to_string();
}

TEST(Evaluate, UndersizedTourViolatesLowerLimit) {
    const Instance inst = support::random_instance(5, 6, 2, 3, 4);
    const IlpModel m = build_model(inst);
    const IlpEvaluation e = evaluate(m, make(inst, {{2, 3, 4, 5}, {6, 7}}));
    EXPECT_GT(e.count(10), 0) << e.to_string();
}

TEST(Evaluate, MergedToursViolateDepotDegree) {
    const Instance inst = support::random_instance(6, 6, 2, 2, 6);
    const IlpModel m = build_model(inst);
    const IlpEvaluation e = evaluate(m, make(inst, {{2, 3, 4, 5, 6, 7}, {}}));
    EXPECT_EQ(e.count(5), 1);
    EXPECT_EQ(e.count(6), 1);
}

TEST(Evaluate, SingletonTourIsRejected) {
    const Instance inst = support::random_instance(7, 4, 2, 1, 3);
    const IlpModel m = build_model(inst);
    const IlpEvaluation e = evaluate(m, make(inst, {{2}, {3, 4, 5}}));
    EXPECT_EQ(e.count(11), 1);
}

TEST(Evaluate, CitySetMismatchThrows) {
    const Instance inst = support::random_instance(8, 4, 2, 2, 2);
    const IlpModel m = build_model(inst);
    EXPECT_THROW(evaluate(m, make(inst, {{2, 3}, {4, 4}})), EncodingError);
    EXPECT_THROW(evaluate(m, make(inst, {{2, 3}, {4}})), EncodingError);
    Solution bad{{Tour{{2, 3}}, Tour{{4, 9}}}, 0};
    EXPECT_THROW(evaluate(m, bad), EncodingError);
    Solution depot{{Tour{{2, 1}}, Tour{{3, 4, 5}}}, 0};
    EXPECT_THROW(evaluate(m, depot), EncodingError);
}

TEST(Evaluate, SoundOnRandomValidSolutions) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const Instance inst = support::random_instance(seed, 9, 3, 2, 4);
        const IlpModel m = build_model(inst);
        Rng rng(seed);
        const Solution s = support::random_solution(inst, rng);
        const IlpEvaluation e = evaluate(m, s);
        EXPECT_TRUE(e.feasible()) << e.to_string();
        EXPECT_NEAR(e.objective, s.total_cost, 1e-6);
    }
}

TEST(Evaluate, SubtourAmongCustomersIsCaught) {
    // x encodes depot->2->3->depot plus a detached cycle 4->5->4.
    const Instance inst = support::random_instance(9, 4, 1, 2, 4);
    const IlpModel m = build_model(inst);
    std::vector<double> v(m.variables.size(), 0.0);
    auto set = [&](CityId i, CityId j) { v[static_cast<std::size_t>(m.x_index(i, j))] = 1; };
    set(1, 2);
    set(2, 3);
    set(3, 1);
    set(4, 5);
    set(5, 4);
    // Try every u assignment in range: the subtour rows reject all of them.
    bool any_feasible = false;
    for (int a = 1; a <= 4; ++a)
        for (int b = 1; b <= 4; ++b)
            for (int c = 1; c <= 4; ++c)
                for (int d = 1; d <= 4; ++d) {
                    v[static_cast<std::size_t>(m.u_index(2))] = a;
                    v[static_cast<std::size_t>(m.u_index(3))] = b;
                    v[static_cast<std::size_t>(m.u_index(4))] = c;
                    v[static_cast<std::size_t>(m.u_index(5))] = d;
                    any_feasible = any_feasible || check_assignment(m, v).feasible();
                }
    EXPECT_FALSE(any_feasible);
}

TEST(ExportLp, GoldenTwoCustomerModel) {
    const Instance inst = load_instance(support::fixture("micro2.bmtsp"));
    EXPECT_EQ(export_lp(build_model(inst)), read_file(support::fixture("micro2.lp")));
}

TEST(ExportLp, DeterministicAndInjective) {
    const Instance a = support::random_instance(10, 12, 3, 2, 6, 1000, "a");
    EXPECT_EQ(export_lp(build_model(a)), export_lp(build_model(a)));
    const Instance b = support::random_instance(11, 12, 3, 2, 6, 1000, "a");
    EXPECT_NE(export_lp(build_model(a)), export_lp(build_model(b)));
    const Instance c = support::random_instance(10, 12, 3, 3, 6, 1000, "a");
    EXPECT_NE(export_lp(build_model(a)), export_lp(build_model(c)));
}

TEST(ExportLp, RoundTripsThroughTheReader) {
    const Instance inst = support::random_instance(12, 15, 3, 3, 7, 1000, "rt");
    const IlpModel m = build_model(inst);
    const std::string text = export_lp(m);
    const IlpModel back = parse_lp(text);
    EXPECT_EQ(back, m);
    EXPECT_EQ(export_lp(back), text);
    // Constraint rows in the file match the model counts.
    std::size_t rows = 0;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind(" eq", 0) == 0) ++rows;
    }
    EXPECT_EQ(rows, m.constraints.size());
    for (const std::string& l : {text}) {
        std::istringstream all(l);
        while (std::getline(all, line)) EXPECT_LE(line.size(), 80u);
    }
}

TEST(ParseLp, AcceptsLooseFormatting) {
    const std::string text = R"(\ hand written
minimize
  obj: 2 x +3 y
subject to
  c1: x + y >= 1
  eq9_4: - x
     + 2 y <= 4
Bounds
  y <= 5
  x >= 0
Binaries
  x
Generals
  y
end
)";
    const IlpModel m = parse_lp(text);
    ASSERT_EQ(m.variables.size(), 2u);
    EXPECT_EQ(m.variables[1].name, "y");
    EXPECT_EQ(m.variables[1].upper, 5.0);
    ASSERT_EQ(m.constraints.size(), 2u);
    EXPECT_EQ(m.constraints[0].equation, 0);
    EXPECT_EQ(m.constraints[1].equation, 9);
    EXPECT_EQ(m.constraints[1].terms[0].coef, -1.0);
    EXPECT_EQ(m.constraints[1].sense, Sense::le);
    EXPECT_EQ(m.objective[1].coef, 3.0);
}

TEST(ParseLp, Errors) {
    EXPECT_THROW(parse_lp("Minimize\n obj: x\nEnd\n"), LpSyntaxError);              // undeclared
    EXPECT_THROW(parse_lp("Minimize\n obj: x\nBinary\n x\n"), LpSyntaxError);       // no End
    EXPECT_THROW(parse_lp("Maximize\n obj: x\nBinary\n x\nEnd\n"), LpSyntaxError);  // max
    EXPECT_THROW(parse_lp("Minimize\n obj: x\nSubject To\n c: x 1\nBinary\n x\nEnd\n"), LpSyntaxError);
    EXPECT_THROW(parse_lp("Minimize\n obj: x\nSubject To\n c: x <=\nBinary\n x\nEnd\n"), LpSyntaxError);
    try {
        parse_lp("Minimize\n obj: x\nSubject To\n c: x + z <= 1\nBinary\n x\nEnd\n");
        FAIL();
    } catch (const LpSyntaxError& e) {
        EXPECT_EQ(e.line(), 4);
    }
}

TEST(Completeness, MatchesEnumerationOnTinyInstance) {
    // Every 0/1 x satisfying all rows for some admissible u, against the
    // oracle's solution list with both directions of every tour.
    const Instance inst = support::random_instance(13, 4, 2, 2, 2);
    const IlpModel m = build_model(inst);
    const int nodes = m.nodes;
    std::set<std::vector<double>> expected;
    for (const Solution& s : enumerate_solutions(inst)) {
        for (int mask = 0; mask < 4; ++mask) {
            Solution t = s;
            for (int b = 0; b < 2; ++b) {
                if (mask & (1 << b)) std::reverse(t.tours[b].cities.begin(), t.tours[b].cities.end());
            }
            auto v = encode_solution(m, t);
            v.resize(static_cast<std::size_t>(m.binary_count()));
            expected.insert(v);
        }
    }
    std::set<std::vector<double>> found;
    const int bits = m.binary_count();
    std::vector<double> v(m.variables.size(), 0.0);
    for (long long code = 0; code < (1LL << bits); ++code) {
        for (int b = 0; b < bits; ++b) v[static_cast<std::size_t>(b)] = (code >> b) & 1;
        // Cheap filter on the degree equations before searching u.
        bool degrees_ok = true;
        for (const Constraint& c : m.constraints) {
            if (c.equation > 8) continue;
            double lhs = 0;
            for (const Term& t : c.terms) lhs += t.coef * v[static_cast<std::size_t>(t.var)];
            degrees_ok = degrees_ok && lhs == c.rhs;
        }
        if (!degrees_ok) continue;
        bool feasible = false;
        for (int u = 0; u < 16 && !feasible; ++u) {
            for (int i = 0; i < nodes - 1; ++i) v[static_cast<std::size_t>(bits + i)] = 1 + ((u >> i) & 1);
            feasible = check_assignment(m, v).feasible();
        }
        if (feasible) found.insert(std::vector<double>(v.begin(), v.begin() + bits));
    }
    EXPECT_EQ(found, expected);
    EXPECT_EQ(found.size(), 12u);  // 3 pairings, each 2-city tour in both directions
}
