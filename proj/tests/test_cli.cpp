#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"

namespace kecone::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

class CliFiles : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("kecone_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

TEST(Cli, SolveReportsAlpha) {
    const Outcome o = invoke({"solve", "--tau", "1"});
    EXPECT_EQ(o.code, kSuccess) << o.err;
    EXPECT_NE(o.out.find("alpha_sq = 0.5000000"), std::string::npos) << o.out;
    EXPECT_NE(o.out.find("status = ReachedEnd"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(invoke({}).code, kUsageError);
    EXPECT_EQ(invoke({"frobnicate"}).code, kUsageError);
    EXPECT_EQ(invoke({"solve"}).code, kUsageError);
    EXPECT_EQ(invoke({"solve", "--tau", "-1"}).code, kUsageError);
    EXPECT_EQ(invoke({"solve", "--tau", "1", "--r0", "0.1"}).code, kUsageError);
    EXPECT_EQ(invoke({"solve", "--tau", "1", "--format", "xml"}).code, kUsageError);
    EXPECT_EQ(invoke({"sweep", "--tau-min", "1", "--tau-max", "2", "--steps", "0"}).code,
              kUsageError);
    EXPECT_EQ(invoke({"reference", "--model", "p3", "--param-min", "0", "--param-max", "1"}).code,
              kUsageError);
    EXPECT_EQ(invoke({"compare", "--tau", "10", "--model", "eguchi-hanson"}).code, kUsageError);
    EXPECT_EQ(invoke({"find-beta", "--beta", "2"}).code, kUsageError);
}

TEST(Cli, HelpSucceeds) {
    const Outcome o = invoke({"--help"});
    EXPECT_EQ(o.code, kSuccess);
    EXPECT_NE(o.out.find("sweep"), std::string::npos);
}

TEST(Cli, BudgetFailureIsNumerical) {
    const Outcome o = invoke({"solve", "--tau", "1", "--max-steps", "5"});
    EXPECT_EQ(o.code, kNumericalFailure);
    EXPECT_NE(o.out.find("StepBudgetExhausted"), std::string::npos);
}

TEST(Cli, FindBetaAtThresholdHasNoSolution) {
    const Outcome o = invoke({"find-beta", "--beta", "0.25"});
    EXPECT_EQ(o.code, kNumericalFailure);
    EXPECT_NE(o.err.find("beta > 1/4"), std::string::npos) << o.err;
}

TEST(Cli, FindBetaThird) {
    const Outcome o = invoke({"find-beta", "--beta", "0.333333"});
    EXPECT_EQ(o.code, kSuccess) << o.err;
    EXPECT_NE(o.out.find("tau = 6.7"), std::string::npos) << o.out;
}

TEST(Cli, CompareThresholds) {
    EXPECT_EQ(invoke({"compare", "--tau", "10000"}).code, kSuccess);
    EXPECT_EQ(invoke({"compare", "--tau", "10"}).code, kNumericalFailure);
    const Outcome loose =
        invoke({"compare", "--tau", "10", "--max-error-f", "0.1", "--max-error-csq", "0.1"});
    EXPECT_EQ(loose.code, kSuccess) << loose.err;
    EXPECT_NE(loose.out.find("model = p114"), std::string::npos);
}

TEST(Cli, SweepToStdoutIsCsv) {
    const Outcome o = invoke({"sweep", "--tau-min", "1", "--tau-max", "3", "--steps", "3"});
    EXPECT_EQ(o.code, kSuccess) << o.err;
    std::istringstream lines(o.out);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "tau,alpha_sq,beta,t_max,stabilization_residual,status");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        EXPECT_NE(line.find("ReachedEnd"), std::string::npos);
    }
    EXPECT_EQ(rows, 3);
}

TEST_F(CliFiles, SweepIsByteIdenticalAcrossRunsAndThreads) {
    const std::vector<std::string> common{"sweep", "--tau-min", "1", "--tau-max", "1000",
                                          "--steps", "9", "--log"};
    auto with = [&](const std::string& out, const std::string& threads) {
        auto args = common;
        args.insert(args.end(), {"--out", path(out), "--threads", threads});
        return invoke(args);
    };
    ASSERT_EQ(with("a.csv", "1").code, kSuccess);
    ASSERT_EQ(with("b.csv", "1").code, kSuccess);
    ASSERT_EQ(with("c.csv", "4").code, kSuccess);
    const std::string a = slurp(path("a.csv"));
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(path("b.csv")));
    EXPECT_EQ(a, slurp(path("c.csv")));
}

TEST_F(CliFiles, SolveWritesDeterministicTrajectory) {
    ASSERT_EQ(invoke({"solve", "--tau", "6.73", "--out", path("a.csv")}).code, kSuccess);
    ASSERT_EQ(invoke({"solve", "--tau", "6.73", "--out", path("b.csv")}).code, kSuccess);
    const std::string a = slurp(path("a.csv"));
    EXPECT_EQ(a.substr(0, 6), "r,f,h\n");
    EXPECT_EQ(a, slurp(path("b.csv")));
}

TEST_F(CliFiles, JsonFormat) {
    ASSERT_EQ(invoke({"profile", "--tau", "3", "--out", path("p.json"), "--format", "json"}).code,
              kSuccess);
    const std::string j = slurp(path("p.json"));
    EXPECT_EQ(j.front(), '[');
    EXPECT_NE(j.find("\"c_sq\""), std::string::npos);
}

TEST_F(CliFiles, GnuplotScript) {
    const Outcome o = invoke({"bubble", "--tau", "5000", "--out", path("b.csv"),
                              "--gnuplot-script", path("b.gp")});
    ASSERT_EQ(o.code, kSuccess) << o.err;
    EXPECT_NE(slurp(path("b.gp")).find(path("b.csv")), std::string::npos);
    EXPECT_EQ(slurp(path("b.csv")).substr(0, 4), "r,f_");
    EXPECT_EQ(invoke({"bubble", "--tau", "5", "--gnuplot-script", path("x.gp")}).code,
              kUsageError);
}

TEST_F(CliFiles, ConfigFileFillsUnsetFlags) {
    {
        std::ofstream cfg(path("run.cfg"));
        cfg << "# shooting parameters\n"
            << "tau = 3\n"
            << "max-steps = 5\n";
    }
    // tau comes from the file; the flag overrides max-steps.
    const Outcome o = invoke({"solve", "--config", path("run.cfg"), "--max-steps", "100000"});
    EXPECT_EQ(o.code, kSuccess) << o.err;
    EXPECT_NE(o.out.find("alpha_sq = 0.33333"), std::string::npos) << o.out;

    const Outcome starved = invoke({"solve", "--config", path("run.cfg")});
    EXPECT_EQ(starved.code, kNumericalFailure);

    {
        std::ofstream cfg(path("bad.cfg"));
        cfg << "tua = 3\n";
    }
    EXPECT_EQ(invoke({"solve", "--config", path("bad.cfg")}).code, kUsageError);
    EXPECT_EQ(invoke({"solve", "--config", path("missing.cfg")}).code, kUsageError);
}

TEST_F(CliFiles, ReferenceTable) {
    const Outcome o = invoke({"reference", "--model", "eguchi-hanson", "--param-min", "0",
                              "--param-max", "2", "--samples", "5"});
    EXPECT_EQ(o.code, kSuccess);
    EXPECT_EQ(o.out.substr(0, 15), "param,a,b,c,f\n0");
    EXPECT_EQ(invoke({"reference", "--model", "p2", "--param-min", "0", "--param-max", "3"}).code,
              kUsageError);
}

}  // namespace
}  // namespace kecone::cli
