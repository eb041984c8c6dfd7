#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qmax_cli.hpp"

namespace {

namespace fs = std::filesystem;
using qmax::cli::json;

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    args.insert(args.begin(), "qmax");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = qmax::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("qmax_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path dir_;
};

TEST_F(CliTest, AnalyzeGeoReportsAnalyticValues) {
    const auto r = run({"analyze", "geo", "--p", "1/3", "--r", "1/6", "--c", "3", "--n", "100000"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["command"], "analyze");
    EXPECT_NEAR(j["omega"].get<double>(), 0.5744080010, 1e-9);
    EXPECT_NEAR(j["hitting"]["nu0"].get<double>(), 0.8437587438, 1e-9);
    EXPECT_NEAR(j["clump_rate"].get<double>(), 0.0841657058, 1e-9);
    EXPECT_NEAR(j["slope"].get<double>(), 1.8037019224, 1e-9);
    EXPECT_NEAR(j["intercept"].get<double>(), -2.9229790566, 1e-9);
    EXPECT_NEAR(j["mean_queue_length"].get<double>(), 2.56365, 1e-5);
    EXPECT_NEAR(j["stationary"]["total_mass"].get<double>(), 1.0, 1e-10);
    EXPECT_FALSE(j["cdf"].empty());
}

TEST_F(CliTest, AnalyzeMmReportsExpectedMaxima) {
    const auto r = run({"analyze", "mm", "--lambda", "1/3", "--mu", "0.5", "--n", "20000"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_NEAR(j["max_wait"]["system"]["expected_max"].get<double>(), 43.109, 1e-3);
    EXPECT_NEAR(j["max_wait"]["queue"]["expected_max"].get<double>(), 40.676, 1e-3);
    EXPECT_NEAR(j["mean_wait"]["queue"].get<double>(), 4.0, 1e-12);
}

TEST_F(CliTest, AnalyzeMmMultiServerHasNoClosedForm) {
    const auto r = run({"analyze", "mm", "--lambda", "1/3", "--mu", "1/6", "--c", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_TRUE(j["max_wait"].is_null());
    EXPECT_NEAR(j["mean_wait"]["queue"].get<double>(), 8.0 / 3.0, 1e-12);
}

TEST_F(CliTest, AnalyzeWritesFilesWhenAsked) {
    const auto r = run({"analyze", "geo", "--p", "1/3", "--r", "1/2", "--c", "1", "--out", dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir_ / "summary.json"));
    EXPECT_TRUE(fs::exists(dir_ / "cdf.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "manifest.json"));
}

TEST_F(CliTest, UnstableParametersExitWithValidationCode) {
    const auto r = run({"analyze", "geo", "--p", "0.9", "--r", "0.2", "--c", "3"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("error"), std::string::npos);
    EXPECT_EQ(run({"analyze", "geo", "--p", "1/3", "--r", "1/6", "--c", "4"}).code, 2);
    EXPECT_EQ(run({"analyze", "geo", "--p", "abc", "--r", "1/6"}).code, 2);
    EXPECT_EQ(run({"analyze", "mm", "--lambda", "1", "--mu", "1"}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"simulate", "geo", "--p", "1/3", "--r", "1/6", "--reps", "0", "--out", dir_.string()}).code, 2);
}

// Tiny rates at 99.9% load leave the hitting system numerically singular.
TEST_F(CliTest, NumericFailureExitsWithCodeThree) {
    const auto r = run({"analyze", "geo", "--p", "1e-6", "--r", "3.33666667e-7", "--c", "3"});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("numeric error"), std::string::npos);
}

TEST_F(CliTest, SameSeedGivesIdenticalSamples) {
    const fs::path a = dir_ / "a", b = dir_ / "b";
    for (const auto& d : {a, b}) {
        const auto r = run({"simulate", "geo", "--p", "1/3", "--r", "1/6", "--n", "2000", "--reps", "30", "--seed",
                            "77", "--threads", d == a ? "1" : "3", "--out", d.string()});
        ASSERT_EQ(r.code, 0) << r.err;
    }
    EXPECT_EQ(slurp(a / "samples.csv"), slurp(b / "samples.csv"));
    EXPECT_FALSE(slurp(a / "samples.csv").empty());
}

TEST_F(CliTest, SamplesCsvRoundTripsToSummary) {
    const auto r = run({"simulate", "mm", "--lambda", "1/3", "--mu", "1/2", "--n", "500", "--reps", "25", "--seed",
                        "5", "--out", dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(slurp(dir_ / "summary.json"));
    const auto xs = qmax::cli::read_csv_column(dir_ / "samples.csv", "max_sys");
    ASSERT_EQ(xs.size(), 25u);
    const auto s = qmax::summarize(xs);
    EXPECT_NEAR(s.mean, j["simulation"]["max_sys"]["mean"].get<double>(), 1e-12);
    EXPECT_NEAR(s.se, j["simulation"]["max_sys"]["se"].get<double>(), 1e-12);
    const json m = json::parse(slurp(dir_ / "manifest.json"));
    EXPECT_FALSE(m.empty());
}

TEST_F(CliTest, ManifestReproducesSummary) {
    const fs::path first = dir_ / "first", second = dir_ / "second";
    ASSERT_EQ(run({"compare", "mm", "--lambda", "1/3", "--mu", "1/4", "--c", "2", "--n", "1000", "--reps", "16",
                   "--seed", "99", "--out", first.string()})
                  .code,
              0);
    const json manifest = json::parse(slurp(first / "manifest.json"));
    std::vector<std::string> args;
    const auto& cmd = manifest["command_line"];
    for (std::size_t i = 1; i < cmd.size(); ++i) {
        const std::string a = cmd[i].get<std::string>();
        args.push_back(a == first.string() ? second.string() : a);
    }
    ASSERT_EQ(run(args).code, 0);
    EXPECT_EQ(slurp(first / "summary.json"), slurp(second / "summary.json"));
    EXPECT_EQ(slurp(first / "samples.csv"), slurp(second / "samples.csv"));
    EXPECT_EQ(slurp(first / "cdf.csv"), slurp(second / "cdf.csv"));
}

TEST_F(CliTest, CompareWithOneReplicationHasNullStandardError) {
    const auto r = run({"compare", "geo", "--p", "1/3", "--r", "1/6", "--n", "1000", "--reps", "1", "--out",
                        dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_TRUE(j["simulation"]["se"].is_null());
    EXPECT_TRUE(j["comparison"]["difference_in_se"].is_null());
    EXPECT_TRUE(j["comparison"]["gumbel_fit"]["location"].is_null());
}

TEST_F(CliTest, CompareMmSingleServerIncludesAnalytic) {
    const auto r = run({"compare", "mm", "--lambda", "1/3", "--mu", "1/2", "--n", "2000", "--reps", "20", "--out",
                        dir_.string(), "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_TRUE(j["comparison"]["system"]["expected_max_analytic"].is_number());
    EXPECT_TRUE(fs::exists(dir_ / "summary.json"));
    EXPECT_FALSE(fs::exists(dir_ / "samples.csv"));
}

TEST_F(CliTest, UnwritableOutputExitsWithIoCode) {
    fs::create_directories(dir_);
    const fs::path blocker = dir_ / "file";
    std::ofstream(blocker) << "x";
    const auto r = run({"simulate", "geo", "--p", "1/3", "--r", "1/6", "--n", "100", "--reps", "2", "--out",
                        (blocker / "sub").string()});
    EXPECT_EQ(r.code, 4) << r.err;
}

TEST_F(CliTest, LeavesNoTemporaryFiles) {
    ASSERT_EQ(run({"simulate", "geo", "--p", "1/3", "--r", "1/6", "--n", "100", "--reps", "3", "--out",
                   dir_.string()})
                  .code,
              0);
    for (const auto& e : fs::directory_iterator(dir_)) EXPECT_NE(e.path().extension(), ".tmp") << e.path();
}

TEST(ParseTest, Numbers) {
    EXPECT_DOUBLE_EQ(qmax::cli::parse_number("1/3"), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(qmax::cli::parse_number("0.25"), 0.25);
    EXPECT_DOUBLE_EQ(qmax::cli::parse_number("2/8"), 0.25);
    EXPECT_THROW(qmax::cli::parse_number("1/0"), qmax::validation_error);
    EXPECT_THROW(qmax::cli::parse_number("x"), qmax::validation_error);
    EXPECT_THROW(qmax::cli::parse_number(""), qmax::validation_error);
    EXPECT_EQ(qmax::cli::parse_count("1e5", "n"), 100000);
    EXPECT_THROW(qmax::cli::parse_count("2.5", "n"), qmax::validation_error);
}

TEST(FormatTest, ShortestRoundTrip) {
    EXPECT_EQ(qmax::cli::format_double(0.5), "0.5");
    EXPECT_EQ(std::stod(qmax::cli::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
