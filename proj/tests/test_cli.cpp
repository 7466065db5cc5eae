#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "biphoton/cli.hpp"

namespace {

namespace fs = std::filesystem;
using biphoton::cli::run_cli;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "biphoton_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "biphoton_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

TEST(Cli, PointPrintsJson) {
  const CliRun r = run({"point", "--state", "gi", "--te-fs", "200", "--lambda-a-nm", "770", "--lambda-b-nm", "854",
                     "--j", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  const double p = doc["p_tpe"];
  EXPECT_TRUE(std::isfinite(p));
  EXPECT_GT(p, 0.0);
  EXPECT_EQ(doc["state"], "gi");
  EXPECT_EQ(doc["policy"], "nominal");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"fig2"}).code, 1);
  EXPECT_EQ(run({"fig2", "--panel", "z"}).code, 1);
  EXPECT_EQ(run({"point", "--state", "xx", "--te-fs", "1"}).code, 1);
  EXPECT_EQ(run({"point", "--state", "sd", "--te-fs", "-5"}).code, 1);
  EXPECT_EQ(run({"verify", "--points", "0"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, Fig2IsByteIdenticalAcrossRuns) {
  const fs::path a = scratch("fig2b_1.csv"), b = scratch("fig2b_2.csv");
  const CliRun r1 = run({"fig2", "--panel", "b", "--out", a.string()});
  const CliRun r2 = run({"fig2", "--panel", "b", "--out", b.string()});
  ASSERT_EQ(r1.code, 0) << r1.err;
  ASSERT_EQ(r2.code, 0) << r2.err;
  const std::string text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4 * 1001 + 1);
  const auto report = nlohmann::json::parse(slurp(scratch("fig2b_1.json")));
  EXPECT_NEAR(report["ratios"]["si_over_gauss_max"].get<double>(), 3.81, 0.381);
  EXPECT_NEAR(report["ratios"]["gi_over_gd_max"].get<double>(), 1.23, 0.0615);
}

TEST(Cli, SweepFromConfigWithFlagOverride) {
  const fs::path cfg = scratch("sweep.json"), out = scratch("sweep.csv");
  std::ofstream(cfg) << R"({"te_start": 1e-14, "te_stop": 5e-14, "te_step": 1e-14, "kinds": ["si"]})";
  const CliRun r = run({"sweep", "--config", cfg.string(), "--te-stop-fs", "30", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string text = slurp(out);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);  // header + 10, 20, 30 fs
  EXPECT_NE(text.find(",si,"), std::string::npos);
  EXPECT_EQ(run({"sweep", "--config", "/nonexistent.json"}).code, 1);
}

TEST(Cli, SweepCouplingGrid) {
  const CliRun r = run({"sweep", "--te-start-fs", "10", "--te-stop-fs", "20", "--te-step-fs", "10", "--j-max", "0.05",
                     "--j-steps", "3", "--states", "gd"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("10,0.025000000000000001,gd,"), std::string::npos) << r.out;
}

TEST(Cli, SweepNumericFailureExitCode) {
  const CliRun r = run({"sweep", "--te-start-fs", "10", "--te-stop-fs", "10", "--mu-debye", "1e200"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("cells failed"), std::string::npos);
}

TEST(Cli, VerifyRederivedPasses) {
  const CliRun r = run({"verify", "--points", "12", "--forms", "rederived"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 13);
  EXPECT_EQ(r.out.find(",no\n"), std::string::npos);
}

TEST(Cli, SpecfunTableIsHiddenButAvailable) {
  const CliRun help = run({"--help"});
  EXPECT_EQ(help.out.find("specfun-table"), std::string::npos);
  const CliRun r = run({"specfun-table"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("x,erfi,", 0), 0u);
}

}  // namespace
