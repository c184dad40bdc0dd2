#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "loglin/errors.hpp"
#include "loglin/scenario.hpp"

using namespace loglin;

namespace {

const std::filesystem::path kDir = LOGLIN_SCENARIO_DIR;

std::string minimal(const std::string& extra = "") {
  return R"({"name": "m", "waypoints": [{"x": 0, "y": 0, "t": 0}, {"x": 19, "y": 0, "t": 1}],
             "disturbance": {"amplitude": [1, 1, 0.1]})" +
         extra + "}";
}

}  // namespace

TEST(Scenario, BundledFilesLoad) {
  const Scenario s = load_scenario(kDir / "small_disturbance.json");
  EXPECT_EQ(s.name, "small-disturbance");
  EXPECT_EQ(s.seed, 42u);
  EXPECT_EQ(s.waypoints.size(), 13u);
  EXPECT_EQ(s.obstacles.size(), 4u);
  EXPECT_EQ(s.q_diag, Eigen::Vector3d(24, 24, 1));
  EXPECT_EQ(s.pipe_runs, 50);
  EXPECT_EQ(s.invariance_runs, 200);
  EXPECT_EQ(s.mc_frequencies.size(), 4u);
  ASSERT_TRUE(s.plan.start_velocity.has_value());
  EXPECT_EQ(*s.plan.start_velocity, Eigen::Vector2d(19, 0));

  const Scenario l = load_scenario(kDir / "large_disturbance.json");
  EXPECT_EQ(l.disturbance.amplitude, Eigen::Vector3d(5, 5, 0.1));
  EXPECT_EQ(l.q_diag, Eigen::Vector3d(100, 100, 1));
}

TEST(Scenario, DefaultsForOptionalSections) {
  const Scenario s = parse_scenario(minimal(), kDir);
  EXPECT_EQ(s.seed, 42u);
  EXPECT_EQ(s.disturbance.kind, DisturbanceKind::Sinusoid);
  EXPECT_EQ(s.dt, 1e-3);
  EXPECT_TRUE(s.obstacles.empty());
  EXPECT_FALSE(s.plan.start_velocity.has_value());
}

TEST(Scenario, InlineObstacles) {
  const Scenario s = parse_scenario(
      minimal(R"(, "obstacles": [{"name": "r", "type": "rect", "min": [0, 0], "max": [1, 2]},
                                   {"type": "polygon", "vertices": [[0, 0], [2, 0], [1, 1]]}])"),
      kDir);
  ASSERT_EQ(s.obstacles.size(), 2u);
  EXPECT_EQ(s.obstacles[0].name, "r");
  EXPECT_NEAR(s.obstacles[0].polygon.area(), 2, 1e-15);
  EXPECT_EQ(s.obstacles[1].name, "obstacle_1");
  EXPECT_TRUE(s.obstacles[1].polygon.is_valid());
}

TEST(Scenario, SchemaErrors) {
  EXPECT_THROW(parse_scenario("[1, 2]", kDir), ScenarioError);
  EXPECT_THROW(parse_scenario("{not json", kDir), ScenarioError);
  EXPECT_THROW(parse_scenario(R"({"waypoints": [], "disturbance": {"amplitude": [1, 1, 1]}})", kDir), ScenarioError);
  EXPECT_THROW(parse_scenario(R"({"name": "x", "disturbance": {"amplitude": [1, 1, 1]}})", kDir), ScenarioError);
  EXPECT_THROW(parse_scenario(minimal(R"(, "seed": -3)"), kDir), ScenarioError);
  EXPECT_THROW(parse_scenario(minimal(R"(, "simulation": {"dt": 0})"), kDir), ScenarioError);
  EXPECT_THROW(parse_scenario(minimal(R"(, "initial_error": [1, 2])"), kDir), ScenarioError);
  EXPECT_THROW(parse_scenario(minimal(R"(, "obstacles": "missing.json")"), kDir), ScenarioError);
  EXPECT_THROW(parse_scenario(minimal(R"(, "obstacles": [{"type": "circle"}])"), kDir), ScenarioError);
  EXPECT_THROW(parse_scenario(R"({"name": "x", "waypoints": [{"x": 0}], "disturbance": {"amplitude": [1, 1, 1]}})",
                              kDir),
               ScenarioError);
  EXPECT_THROW(parse_scenario(R"({"name": "x", "waypoints": [{"x": 0, "y": 0, "t": 0}],
                                  "disturbance": {"kind": "gust", "amplitude": [1, 1, 1]}})",
                              kDir),
               ScenarioError);
  EXPECT_THROW(load_scenario(kDir / "nope.json"), ScenarioError);
}
