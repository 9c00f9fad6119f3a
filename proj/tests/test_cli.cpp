#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("bmtsp_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    CliRun run(const std::string& args) {
        const fs::path err = dir_ / "stderr.txt";
        const std::string cmd = std::string("\"") + BMTSP_CLI_PATH + "\" " + args + " 2>\"" + err.string() + "\"";
        CliRun r;
        FILE* pipe = popen(cmd.c_str(), "r");
        if (pipe == nullptr) return r;
        std::array<char, 4096> buf{};
        std::size_t got = 0;
        while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
        const int status = pclose(pipe);
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.err = read_file(err);
        return r;
    }

    static std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, SolveThenValidate) {
    const fs::path sol = dir_ / "micro8.sol";
    const CliRun s = run("solve " + quoted(support::fixture("micro8.bmtsp")) + " --restarts 3 --seed 5 --out " +
                      quoted(sol));
    ASSERT_EQ(s.code, 0) << s.err;
    EXPECT_NE(s.out.find("micro8 cost"), std::string::npos);
    const CliRun v = run("validate " + quoted(support::fixture("micro8.bmtsp")) + " " + quoted(sol));
    EXPECT_EQ(v.code, 0) << v.out << v.err;
    EXPECT_EQ(v.out.rfind("valid:", 0), 0u);
}

TEST_F(Cli, SolveToStdoutIsDeterministic) {
    const std::string args = "solve " + quoted(support::fixture("micro8.bmtsp")) + " --restarts 4 --seed 9";
    const CliRun a = run(args);
    const CliRun b = run(args + " --jobs 3");
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.err.find("cost"), std::string::npos);
}

TEST_F(Cli, ExactOptimumOfMicroFixture) {
    const CliRun r = run("solve --exact " + quoted(support::fixture("micro8.bmtsp")));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("cost 3204.88"), std::string::npos) << r.err;
}

TEST_F(Cli, ExactRefusesLargeInstances) {
    const CliRun r = run("solve --exact " + quoted(support::repo_path("instances/generated/berlin52_2.bmtsp")));
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(Cli, InfeasibleInstanceExitsTwo) {
    const CliRun r = run("solve " + quoted(support::fixture("infeasible.bmtsp")));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("salesmen * min_cities = 6"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("salesmen * max_cities = 8"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("customers             = 5"), std::string::npos) << r.err;
}

TEST_F(Cli, BoundOverridesTakePrecedence) {
    const CliRun r = run("solve " + quoted(support::fixture("infeasible.bmtsp")) + " --min-cities 2 --restarts 2");
    EXPECT_EQ(r.code, 0) << r.err;
    const CliRun bad = run("solve " + quoted(support::fixture("micro8.bmtsp")) + " --salesmen 4");
    EXPECT_EQ(bad.code, 2);
}

TEST_F(Cli, ValidateRejectsBrokenSolution) {
    const fs::path sol = dir_ / "good.sol";
    ASSERT_EQ(run("solve " + quoted(support::fixture("micro8.bmtsp")) + " --restarts 1 --out " + quoted(sol)).code, 0);
    std::istringstream lines(read_file(sol));
    std::string text;
    std::string line;
    while (std::getline(lines, line)) {
        // Drop the last customer of tour 2 so one city goes missing.
        if (line.rfind("TOUR 2:", 0) == 0) {
            const std::size_t cost = line.find(" COST:");
            std::string head = line.substr(0, cost);
            head = head.substr(0, head.rfind(' '));
            head = head.substr(0, head.rfind(' ')) + " 1";
            line = head + line.substr(cost);
        }
        text += line + "\n";
    }
    const fs::path bad = dir_ / "bad.sol";
    std::ofstream(bad) << text;
    const CliRun r = run("validate " + quoted(support::fixture("micro8.bmtsp")) + " " + quoted(bad));
    EXPECT_EQ(r.code, 3) << r.out << r.err;
    EXPECT_NE(r.out.find("missing"), std::string::npos) << r.out;
}

TEST_F(Cli, GapFormatting) {
    EXPECT_EQ(run("gap 100 101").out, "-0.99%\n");
    EXPECT_EQ(run("gap 102.11 100").out, "2.11%\n");
    EXPECT_EQ(run("gap 5 5").out, "0.00%\n");
    EXPECT_EQ(run("gap 1 0").code, 1);
}

TEST_F(Cli, ExportIlpMatchesGolden) {
    const CliRun r = run("export-ilp " + quoted(support::fixture("micro2.bmtsp")));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, read_file(support::fixture("micro2.lp")));
    const fs::path lp = dir_ / "m.lp";
    ASSERT_EQ(run("export-ilp " + quoted(support::fixture("micro2.bmtsp")) + " --out " + quoted(lp)).code, 0);
    EXPECT_EQ(read_file(lp), r.out);
}

TEST_F(Cli, GenerateWritesAndSkips) {
    const fs::path out = dir_ / "gen";
    const CliRun r = run("generate " + quoted(support::repo_path("instances/tsplib/berlin52.tsp")) +
                      " --mmax 40 --mmax 2 --out-dir " + quoted(out));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(out / "berlin52_2.bmtsp"));
    EXPECT_NE(r.err.find("skipping max_cities 2"), std::string::npos) << r.err;
    EXPECT_EQ(read_file(out / "berlin52_2.bmtsp"),
              read_file(support::repo_path("instances/generated/berlin52_2.bmtsp")));

    const CliRun none = run("generate " + quoted(support::repo_path("instances/tsplib/berlin52.tsp")) +
                         " --mmax 1 --out-dir " + quoted(out));
    EXPECT_EQ(none.code, 2);
}

TEST_F(Cli, GenerateDepotCountingFlag) {
    const fs::path out = dir_ / "gen";
    const std::string src = quoted(support::repo_path("instances/tsplib/berlin52.tsp"));
    const CliRun a = run("generate " + src + " --mmax 10 --out-dir " + quoted(out / "a"));
    const CliRun b = run("generate " + src + " --mmax 10 --count-includes-depot --out-dir " + quoted(out / "b"));
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0) << b.err;
    // 51 customers: ceil(1.3 * 51 / 10) = 7; counting the depot, ceil(1.3 * 52 / 10) = 7 too,
    // so compare the announced parameters rather than the names.
    EXPECT_NE(a.out.find("SALESMEN 7 MIN_CITIES 6 MAX_CITIES 10"), std::string::npos) << a.out;
    EXPECT_NE(b.out.find("SALESMEN 7"), std::string::npos) << b.out;
}

TEST_F(Cli, UnknownFlagExitsOne) {
    EXPECT_EQ(run("solve --no-such-flag x").code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
    EXPECT_EQ(run("").code, 1);
}

TEST_F(Cli, HelpListsOptions) {
    const CliRun r = run("solve --help");
    EXPECT_EQ(r.code, 0);
    for (const char* flag : {"--seed", "--restarts", "--time-limit", "--round-tsplib", "--distance-cache",
                             "--jobs", "--out", "--csv", "--exact", "--salesmen", "--min-cities", "--max-cities"}) {
        EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
    }
}

TEST_F(Cli, SolveCsvTrajectory) {
    const fs::path csv = dir_ / "t.csv";
    const CliRun r = run("solve " + quoted(support::fixture("micro8.bmtsp")) + " --restarts 2 --csv " + quoted(csv));
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string text = read_file(csv);
    EXPECT_EQ(text.rfind("instance,seed,restart,phase,iteration,cost,seconds\n", 0), 0u);
    EXPECT_NE(text.find("micro8,"), std::string::npos);
    EXPECT_NE(text.find(",construction,"), std::string::npos);
}

TEST_F(Cli, BenchSummary) {
    const fs::path in = dir_ / "in";
    fs::create_directories(in);
    fs::copy_file(support::fixture("micro8.bmtsp"), in / "micro8.bmtsp");
    fs::copy_file(support::fixture("micro2.bmtsp"), in / "micro2.bmtsp");
    const fs::path traj = dir_ / "traj.csv";
    const CliRun r = run("bench --dir " + quoted(in) + " --restarts 2 --jobs 2 --trajectory " + quoted(traj));
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line,
              "instance,customers,salesmen,min_cities,max_cities,seed,restarts,best_restart,cost,seconds,truncated,"
              "violations");
    std::getline(lines, line);
    EXPECT_EQ(line.rfind("micro2,2,1,2,2,", 0), 0u) << line;
    EXPECT_EQ(line.substr(line.size() - 4), ",0,0") << line;
    std::getline(lines, line);
    EXPECT_EQ(line.rfind("micro8,8,2,3,5,", 0), 0u) << line;
    EXPECT_TRUE(fs::exists(traj));
}
