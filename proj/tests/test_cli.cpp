#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "unibound/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "unibound");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream err;
  const int code = unibound::cli::run(static_cast<int>(argv.size()), argv.data(), err);
  return {code, err.str()};
}

std::string config(const std::string& name) { return std::string(UNIBOUND_SOURCE_DIR) + "/configs/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("unibound_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Cli, SimulateScalar) {
  const fs::path out = scratch("simulate");
  const Outcome o = run({"simulate", "--config", config("scalar.conf"), "--set", "alpha=1", "--set", "beta=3",
                         "--set", "amplitudes=100", "--set", "t_end=10", "--set", "probe_times=1,10",
                         "--set", "decay.t_lo=1", "--set", "decay.t_hi=10", "--out", out.string()});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(fs::exists(out / "manifest.json"));
  EXPECT_TRUE(fs::exists(out / "trajectory.csv"));
  EXPECT_NE(o.err.find("certificate: pass"), std::string::npos);
}

TEST(Cli, MissingConfigIsRuntimeError) {
  const Outcome o = run({"simulate", "--config", "/no/such/file.conf"});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("/no/such/file.conf"), std::string::npos);
}

TEST(Cli, InvalidOverrideNamesKey) {
  const Outcome o = run({"simulate", "--set", "beta=-1", "--out", scratch("bad").string()});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("beta"), std::string::npos);
  const Outcome u = run({"simulate", "--set", "gamma=1"});
  EXPECT_EQ(u.code, 1);
  EXPECT_NE(u.err.find("gamma"), std::string::npos);
}

TEST(Cli, SoupletSweepDeclaresExpectedFailure) {
  const fs::path out = scratch("souplet");
  const Outcome o = run({"sweep", "--config", config("souplet.conf"), "--out", out.string()});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.err.find("universal_bound: fail"), std::string::npos);
}

TEST(Cli, UnexpectedVerdictExitsWithViolation) {
  const fs::path out = scratch("violation");
  const Outcome o = run({"sweep", "--config", config("souplet.conf"), "--set", "expect.universal_bound=pass",
                         "--out", out.string()});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("expectation mismatch"), std::string::npos);
  const Outcome lenient = run({"sweep", "--config", config("souplet.conf"), "--set", "expect.universal_bound=pass",
                               "--set", "exit_on_violation=false", "--out", out.string()});
  EXPECT_EQ(lenient.code, 0);
}

TEST(Cli, FitDecayOnSyntheticPowerLaw) {
  const fs::path dir = scratch("fit");
  unibound::io::CsvTable t{{"t", "E0"}, {}};
  for (double x = 1.0; x <= 100.0; x *= 1.1) t.rows.push_back({x, 3.0 / (x * x)});
  unibound::io::write_csv(dir / "synthetic.csv", t);
  const Outcome o = run({"--out", dir.string(), "fit-decay", "--csv", (dir / "synthetic.csv").string(), "--t-lo", "1",
                         "--t-hi", "100"});
  EXPECT_EQ(o.code, 0) << o.err;
  const auto pos = o.err.find("slope: ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_NEAR(std::stod(o.err.substr(pos + 7)), -2.0, 1e-10);
  EXPECT_TRUE(fs::exists(dir / "fit_decay.json"));
}

TEST(Cli, VerifyAssumptionsAlias) {
  const fs::path out = scratch("verify");
  const Outcome o = run({"verify", "--config", config("kirchhoff_neumann.conf"), "--out", out.string()});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.err.find("F2: fail"), std::string::npos);
}

TEST(Cli, ReportExistingAndMissing) {
  const fs::path out = scratch("report");
  ASSERT_EQ(run({"verify", "--config", config("kirchhoff_neumann.conf"), "--out", out.string()}).code, 0);
  const Outcome ok = run({"report", out.string()});
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.err.find("verdicts:"), std::string::npos);
  EXPECT_EQ(run({"report", scratch("absent").string()}).code, 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"fit-decay", "--csv", "x.csv"}).code, 1);
  const Outcome help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.err.find("simulate"), std::string::npos);
}
