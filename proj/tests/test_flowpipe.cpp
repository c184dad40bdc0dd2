#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "loglin/errors.hpp"
#include "loglin/flowpipe.hpp"
#include "loglin/pipeline.hpp"
#include "loglin/scenario.hpp"
#include "oracles.hpp"

using namespace loglin;
using Eigen::Matrix3d;
using Eigen::Vector2d;
using Eigen::Vector3d;

namespace {

struct SmallDesign {
  Scenario scenario;
  PlanResult plan;
  Synthesis synthesis;
  Algorithm1Result inversion;
};

const SmallDesign& small() {
  static const SmallDesign d = [] {
    Scenario s = load_scenario(LOGLIN_SCENARIO_DIR "/small_disturbance.json");
    PlanResult plan = plan_reference(s);
    Synthesis syn = synthesize(s);
    Algorithm1Result inv = algorithm1(syn.system);
    return SmallDesign{s, plan, syn, inv};
  }();
  return d;
}

InvariantEllipsoid shaped(const Vector3d& semi_axes) {
  InvariantEllipsoid E;
  E.P = semi_axes.cwiseInverse().cwiseAbs2().asDiagonal();
  return E;
}

double support_gap(const ConvexPolygon& inner, const ConvexPolygon& outer) {
  double worst = -INFINITY;
  for (int j = 0; j < 64; ++j) {
    const double a = 2 * std::numbers::pi * j / 64;
    const Vector2d d(std::cos(a), std::sin(a));
    worst = std::max(worst, inner.support(d) - outer.support(d));
  }
  return worst;
}

}  // namespace

TEST(Projection, TranslationOnlySetIsAnEllipse) {
  // With zero heading spread exp(zeta) is a pure translation; the dilation
  // makes up for the sphere samples missing the equator.
  const ConvexPolygon p = project_invariant_set(shaped({2, 1, 1e-9}), 256, 1.01);
  for (int i = 0; i < 360; ++i) {
    const double a = i * std::numbers::pi / 180;
    EXPECT_TRUE(p.contains({2 * std::cos(a), std::sin(a)}, 1e-12));
  }
  EXPECT_NEAR(p.area(), std::numbers::pi * 2, 0.03 * std::numbers::pi * 2);
}

TEST(Projection, DegenerateSetFallsBackToADisk) {
  const ConvexPolygon p = project_invariant_set(shaped({1e-12, 1e-12, 1e-12}));
  EXPECT_FALSE(p.empty());
  EXPECT_LT(p.max_corner().norm(), 1e-8);
  EXPECT_THROW(project_invariant_set(shaped({1, 1, 3.2})), AngleWrap);
}

// Interior points of the set land inside the projection.
TEST(Projection, ContainsImagesOfInteriorPoints) {
  const Scenario large = load_scenario(LOGLIN_SCENARIO_DIR "/large_disturbance.json");
  const std::vector<std::pair<InvariantEllipsoid, int>> cases = {
      {small().inversion.ellipsoid, 256},
      {algorithm1(synthesize(large).system).ellipsoid, 256},
      {shaped({1.5, 0.5, 1.2}), 256}};
  for (const auto& [E, n_dirs] : cases) {
    const ConvexPolygon p = project_invariant_set(E, n_dirs);
    for (int i = 0; i < 10000; ++i) {
      const Vector3d z = sample_in_ellipsoid(E.P, run_seed(7, i));
      ASSERT_LE(z.dot(E.P * z), 1 + 1e-12);
      EXPECT_TRUE(p.contains(se2::exp(z).translation(), 1e-12)) << "sample " << i;
    }
  }
}

// The outer polygon stays close to the densely sampled image.
TEST(Projection, IsTight) {
  const InvariantEllipsoid E = shaped({1.5, 0.5, 1.2});
  const ConvexPolygon p = project_invariant_set(E);
  std::vector<Vector2d> img;
  for (int i = 0; i < 20000; ++i) {
    const Vector3d z = sample_in_ellipsoid(E.P, run_seed(9, i));
    img.push_back(se2::exp(z / std::sqrt(z.dot(E.P * z))).translation());
  }
  const ConvexPolygon dense = convex_hull(img);
  EXPECT_LT(support_gap(dense, p), 0.0);
  EXPECT_LT(p.area(), 1.05 * dense.area());
}

TEST(Sweep, ZeroSpanIsARotation) {
  const ConvexPolygon box = ConvexPolygon::Box({1, -0.5}, {2, 0.5});
  const ConvexPolygon s = sweep_rotation(box, 0.3, 0.3);
  EXPECT_NEAR(s.area(), box.area(), 1e-12);
  EXPECT_LT(support_gap(s, box.rotated(0.3)), 1e-12);
}

TEST(Sweep, CoversEveryIntermediateAngle) {
  const ConvexPolygon box = ConvexPolygon::Box({1, -0.5}, {2, 0.5});
  const ConvexPolygon s = sweep_rotation(box, -0.4, 1.1, 4);
  for (int k = 0; k <= 300; ++k) {
    const ConvexPolygon r = box.rotated(-0.4 + 1.5 * k / 300);
    for (const auto& v : r.vertices()) EXPECT_TRUE(s.contains(v, 1e-12));
  }
  EXPECT_THROW(sweep_rotation(box, 0, std::numbers::pi), SpanTooLarge);
  EXPECT_THROW(sweep_rotation(box, 1, 0), InvalidArgument);
}

TEST(Sweep, QuarterTurnOfUnitSquare) {
  const ConvexPolygon sq = ConvexPolygon::Box({0, 0}, {1, 1});
  const ConvexPolygon s = sweep_rotation(sq, 0, std::numbers::pi / 2);
  const double pad = std::sqrt(2.0) * (std::numbers::pi / 2 / 32) / 2;
  for (const auto& v : s.vertices()) EXPECT_LE(v.norm(), (std::sqrt(2.0) + pad) / std::cos(std::numbers::pi / 16) + 1e-12);
  for (const auto& v : sq.vertices()) EXPECT_TRUE(s.contains(v, 1e-12));
  // The swept corner (1, 1) traces a quarter circle of radius sqrt 2.
  for (int k = 0; k <= 90; ++k) {
    const double a = std::numbers::pi / 4 + k * std::numbers::pi / 180;
    EXPECT_TRUE(s.contains(std::sqrt(2.0) * Vector2d(std::cos(a), std::sin(a)), 1e-12));
  }
}

TEST(WindowGrid, Layout) {
  const auto g = window_grid(0, 10, 0.5);
  ASSERT_EQ(g.size(), 21u);
  EXPECT_EQ(g.back(), 10.0);
  const auto h = window_grid(0, 1.2, 0.5);
  ASSERT_EQ(h.size(), 3u);
  EXPECT_EQ(h[1], 0.5);
  EXPECT_EQ(h[2], 1.2);
  EXPECT_THROW(window_grid(0, 1, 0), InvalidArgument);
}

TEST(FlowPipe, PointSetReducesToHullBoxes) {
  const auto& traj = small().plan.trajectory;
  const auto grid = window_grid(0, 4, 0.5);
  const auto pipe = build_flow_pipe(traj, shaped({1e-10, 1e-10, 1e-10}), grid);
  ASSERT_EQ(pipe.size(), grid.size() - 1);
  for (const auto& seg : pipe) {
    const IntervalHull h = interval_hull(traj, seg.t0, seg.t1, 100);
    const ConvexPolygon box = ConvexPolygon::Box(h.lo, h.hi);
    EXPECT_LT(std::abs(support_gap(seg.polygon, box)), 1e-6);
    EXPECT_LT(std::abs(support_gap(box, seg.polygon)), 1e-6);
  }
}

TEST(FlowPipe, ShrinkingTheSetShrinksThePipe) {
  const auto& traj = small().plan.trajectory;
  const auto grid = window_grid(0, 10, 0.5);
  InvariantEllipsoid E = small().inversion.ellipsoid;
  const auto big = build_flow_pipe(traj, E, grid);
  E.P *= 4;
  const auto tight = build_flow_pipe(traj, E, grid);
  for (std::size_t i = 0; i < big.size(); ++i) {
    EXPECT_LT(support_gap(tight[i].polygon, big[i].polygon), 1e-9);
    EXPECT_LT(tight[i].polygon.area(), big[i].polygon.area());
  }
}

TEST(FlowPipe, MonteCarloRunsStayInside) {
  const SmallDesign& d = small();
  const auto& traj = d.plan.trajectory;
  const auto pipe = build_flow_pipe(traj, d.inversion.ellipsoid, window_grid(0, 10, d.scenario.window), d.scenario.pipe);
  for (std::size_t run = 0; run < 5; ++run) {
    const Trace tr = simulate_closed_loop(monte_carlo_sim(d.scenario, traj, d.synthesis.control, d.inversion.ellipsoid,
                                                          ControlMode::DynamicInversion, run));
    for (std::size_t k = 0; k < tr.size(); ++k) {
      const double t = tr.t[k];
      bool inside = false;
      for (const auto& seg : pipe)
        if (t >= seg.t0 - 1e-12 && t <= seg.t1 + 1e-12) inside = inside || seg.polygon.contains(tr.X[k].translation(), 1e-9);
      ASSERT_TRUE(inside) << "run " << run << " t " << t;
    }
  }
}

TEST(Verify, Verdicts) {
  const std::vector<FlowPipeSegment> pipe = {{0, 1, ConvexPolygon::Box({0, -1}, {10, 1})},
                                             {1, 2, ConvexPolygon::Box({10, -1}, {20, 1})}};
  EXPECT_TRUE(verify_safety(pipe, {}).safe);
  const std::vector<Obstacle> far = {{"far", ConvexPolygon::Box({0, 5}, {20, 6})}};
  EXPECT_TRUE(verify_safety(pipe, far).safe);
  const std::vector<Obstacle> hit = {{"far", ConvexPolygon::Box({0, 5}, {20, 6})},
                                     {"hit", ConvexPolygon::Box({15, 0.5}, {16, 3})}};
  const SafetyReport r = verify_safety(pipe, hit);
  EXPECT_FALSE(r.safe);
  ASSERT_EQ(r.collisions.size(), 1u);
  EXPECT_EQ(r.collisions[0].segment, 1u);
  EXPECT_EQ(r.collisions[0].obstacle, 1u);
  EXPECT_EQ(r.collisions[0].t0, 1.0);
}

TEST(Verify, BundledScenarios) {
  const SmallDesign& d = small();
  const auto pipe = build_flow_pipe(d.plan.trajectory, d.inversion.ellipsoid, window_grid(0, 10, 0.5), d.scenario.pipe);
  EXPECT_TRUE(verify_safety(pipe, d.scenario.obstacles).safe);

  const Scenario large = load_scenario(LOGLIN_SCENARIO_DIR "/large_disturbance.json");
  const Algorithm1Result inv = algorithm1(synthesize(large).system);
  const auto lpipe = build_flow_pipe(plan_reference(large).trajectory, inv.ellipsoid, window_grid(0, 10, 0.5), large.pipe);
  EXPECT_FALSE(verify_safety(lpipe, large.obstacles).safe);
}
