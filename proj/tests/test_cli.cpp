#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = LOGLIN_SCENARIO_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("loglin_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(LOGLIN_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, VerifyExitCodes) {
  const fs::path out = scratch("verify");
  EXPECT_EQ(run("verify --scenario " + (kScenarios / "small_disturbance.json").string() + " --out " +
                (out / "small").string()),
            0);
  EXPECT_EQ(run("verify --scenario " + (kScenarios / "large_disturbance.json").string() + " --out " +
                (out / "large").string()),
            2);
  EXPECT_TRUE(fs::exists(out / "small" / "report.json"));
  EXPECT_NE(slurp(out / "large" / "report.json").find("UNSAFE"), std::string::npos);
  fs::remove_all(out);
}

TEST(Cli, BadInputsExitWithOne) {
  const fs::path out = scratch("bad");
  std::ofstream(out / "empty.json") << R"({"name": "empty", "waypoints": [],
    "disturbance": {"amplitude": [1, 1, 0.1]}})";
  EXPECT_EQ(run("simulate --scenario " + (out / "empty.json").string() + " --out " + out.string()), 1);
  EXPECT_EQ(run("simulate --scenario " + (out / "missing.json").string()), 1);
  EXPECT_EQ(run("simulate"), 1);
  EXPECT_EQ(run("launch --scenario " + (kScenarios / "small_disturbance.json").string()), 1);
  EXPECT_EQ(run("simulate --scenario " + (kScenarios / "small_disturbance.json").string() + " --dt -1 --out " +
                out.string()),
            1);
  EXPECT_EQ(run("--help"), 0);
  fs::remove_all(out);
}

TEST(Cli, SimulateWritesDeterministicOutputs) {
  const fs::path a = scratch("sim_a"), b = scratch("sim_b");
  const std::string scen = "--scenario " + (kScenarios / "small_disturbance.json").string() + " --dt 0.01";
  ASSERT_EQ(run("simulate " + scen + " --out " + a.string()), 0);
  ASSERT_EQ(run("simulate " + scen + " --out " + b.string()), 0);
  for (const char* f : {"trace.csv", "reference.csv", "simulate.svg", "simulate.json"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  EXPECT_EQ(slurp(a / "trace.csv").rfind("t,x,y,theta", 0), 0u);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, InvariantWritesEllipsoids) {
  const fs::path out = scratch("inv");
  ASSERT_EQ(run("invariant --scenario " + (kScenarios / "small_disturbance.json").string() + " --out " + out.string()),
            0);
  for (const char* f : {"ellipsoid.json", "ellipsoid_no_inversion.json", "invariant.json", "invariant.svg"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  EXPECT_NE(slurp(out / "invariant.json").find("\"ratio\""), std::string::npos);
  fs::remove_all(out);
}
