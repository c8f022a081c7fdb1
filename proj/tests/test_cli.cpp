#include "fro/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int status = fro::cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

const std::string dough_csv = std::string(FRO_TEST_DATA_DIR) + "/wheat_dough.csv";

}  // namespace

TEST(Cli, SolveDefaults) {
    const auto r = run({"solve"});
    ASSERT_EQ(r.status, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 102u);
    EXPECT_EQ(ls[0], "time,value");
    for (std::size_t i = 1; i < ls.size(); ++i) EXPECT_EQ(ls[i].substr(ls[i].find(',') + 1), "0") << ls[i];
    EXPECT_EQ(ls.back().substr(0, ls.back().find(',')), "10");
}

TEST(Cli, OrderOutOfRange) {
    const auto r = run({"solve", "--alpha", "2.5"});
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.err.find("0, 2]"), std::string::npos) << r.err;
    EXPECT_TRUE(r.out.empty());
}

TEST(Cli, MittagLefflerValue) {
    const auto r = run({"ml", "--alpha", "1", "--beta", "1", "--z", "-1"});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out.rfind("0.367879441171", 0), 0u) << r.out;
    EXPECT_EQ(run({"ml", "--alpha", "0.5", "--z", "1"}).status, 2);
}

TEST(Cli, ForcedRelaxationRun) {
    const auto r = run({"solve", "--alpha", "0.7", "--coeff", "1", "--dt", "0.02", "--duration", "4", "--forcing",
                        "5*cos(t^2)*exp(-t)"});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(lines(r.out).size(), 202u);
}

TEST(Cli, RunsAreByteIdentical) {
    const std::vector<std::string> args{"solve", "--alpha", "1.8", "--y0", "1", "--yp0", "1", "--forcing",
                                        "cos(t^2)*exp(-t)", "--format", "json"};
    EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, HelpShowsDefaults) {
    const auto r = run({"solve", "--help"});
    EXPECT_EQ(r.status, 0);
    for (const char* needle : {"--alpha", "0.5", "--coeff", "--dt", "0.1", "--duration", "10", "--y0", "--yp0",
                               "--forcing"}) {
        EXPECT_NE(r.out.find(needle), std::string::npos) << needle;
    }
}

TEST(Cli, JsonEchoesParameters) {
    const auto r = run({"analytic", "--alpha", "2", "--y0", "1", "--format", "json"});
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["meta"]["alpha"], 2.0);
    EXPECT_EQ(j["meta"]["method"], "analytic");
    EXPECT_EQ(j["u"].size(), 101u);
    EXPECT_NEAR(j["u"][100].get<double>(), std::cos(10.0), 1e-10);
}

TEST(Cli, UsageErrors) {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"solve", "--bogus", "1"}, {"frobnicate"}, {}, {"solve", "--alpha", "abc"},
          {"solve", "--format", "xml"}}) {
        const auto r = run(args);
        EXPECT_EQ(r.status, 2) << (args.empty() ? "" : args[0]);
        EXPECT_FALSE(r.err.empty());
    }
}

TEST(Cli, ForcingSyntaxErrorIsUsageError) {
    const auto r = run({"solve", "--forcing", "cos("});
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.err.find("parenthes"), std::string::npos) << r.err;
}

TEST(Cli, WritesOutputFile) {
    const auto path = std::filesystem::temp_directory_path() / "fro_cli_out.csv";
    const auto r = run({"solve", "--y0", "1", "--duration", "1", "-o", path.string()});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first, "time,value");
    std::filesystem::remove(path);
    EXPECT_EQ(run({"solve", "-o", "/nonexistent/dir/out.csv"}).status, 1);
}

TEST(Cli, FitOnDataFile) {
    const auto r = run({"fit", "--data", dough_csv, "--alpha-min", "0.4", "--alpha-max", "0.6", "--coeff-min", "0.2",
                        "--coeff-max", "0.3", "--dt", "0.05"});
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["evaluated"], 15);
    EXPECT_LE(j["relative_rmse"].get<double>(), 0.05);
    EXPECT_EQ(j["params"]["y0"], 710.0);
    EXPECT_EQ(j["params"]["duration"], 20.0);
}

TEST(Cli, FitMissingFile) {
    EXPECT_EQ(run({"fit", "--data", "/nonexistent/x.csv"}).status, 1);
}

TEST(Cli, ConvergeTable) {
    const auto r = run({"converge", "--alpha", "1", "--y0", "1", "--dt", "0.0625", "--duration", "2"});
    ASSERT_EQ(r.status, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 6u);
    EXPECT_EQ(ls[0], "h,nodes,max_error");
    EXPECT_EQ(ls[1].substr(0, ls[1].find(',')), "0.0625");
    EXPECT_EQ(ls[5].rfind("# slope 2.0", 0), 0u) << ls[5];
}

TEST(Cli, Version) {
    const auto r = run({"--version"});
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find(fro::version), std::string::npos);
}
