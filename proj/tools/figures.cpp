#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "commands.hpp"
#include "loglin/svg.hpp"

namespace loglin::app {
namespace {

using svg::Bounds;
using svg::Style;
using V2 = Eigen::Vector2d;

constexpr const char* kBlue = "#1f77b4";
constexpr const char* kRed = "#d62728";
constexpr const char* kGreen = "#2ca02c";
constexpr const char* kGrey = "#7f7f7f";

// At most ~max_points evenly strided samples of a series.
template <class F>
std::vector<V2> series(std::size_t n, F&& at, std::size_t max_points = 2000) {
  std::vector<V2> pts;
  const std::size_t stride = std::max<std::size_t>(1, n / max_points);
  for (std::size_t k = 0; k < n; k += stride) pts.push_back(at(k));
  if (n > 0 && (n - 1) % stride != 0) pts.push_back(at(n - 1));
  return pts;
}

Bounds bounds_of(const std::vector<std::vector<V2>>& sets) {
  Bounds b = Bounds::empty();
  for (const auto& s : sets) {
    for (const auto& p : s) b.include(p);
  }
  return b;
}

// Boundary of the shadow of {z^T P z <= 1} on coordinates (i, j).
std::vector<V2> shadow(const Eigen::Matrix3d& P, int i, int j, int n = 180) {
  const Eigen::Matrix3d Pinv = P.inverse();
  Eigen::Matrix2d S;
  S << Pinv(i, i), Pinv(i, j), Pinv(j, i), Pinv(j, j);
  const Eigen::Matrix2d L = S.llt().matrixL();
  std::vector<V2> pts;
  for (int k = 0; k <= n; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n;
    pts.push_back(L * V2(std::cos(a), std::sin(a)));
  }
  return pts;
}

}  // namespace

std::string simulate_svg(const Trace& trace, const std::string& title) {
  svg::Figure fig(1260, 420);
  const std::size_t n = trace.size();

  const auto path = series(n, [&](std::size_t k) { return V2(trace.X[k].translation()); });
  const auto ref = series(n, [&](std::size_t k) { return V2(trace.Xbar[k].translation()); });
  int p = fig.panel(70, 40, 340, 320, bounds_of({path, ref}).padded(0.05), title + ": group", "x [m]", "y [m]", true);
  fig.polyline(p, ref, {kGrey, "none", 2.0, 1.0});
  fig.polyline(p, path, {kBlue, "none", 1.0, 1.0});
  fig.legend(p, {{"reference", kGrey}, {"vehicle", kBlue}});

  std::vector<std::vector<V2>> z(3), zm(3);
  for (int c = 0; c < 3; ++c) {
    z[c] = series(n, [&](std::size_t k) { return V2(trace.t[k], trace.zeta[k](c)); });
    zm[c] = series(n, [&](std::size_t k) { return V2(trace.t[k], trace.zeta_model[k](c)); });
  }
  p = fig.panel(490, 40, 340, 320, bounds_of(z).padded(0.05), "algebra error", "t [s]", "zeta");
  const char* colors[3] = {kBlue, kRed, kGreen};
  for (int c = 0; c < 3; ++c) {
    fig.polyline(p, zm[c], {kGrey, "none", 3.0, 0.5});
    fig.polyline(p, z[c], {colors[c], "none", 1.0, 1.0});
  }
  fig.legend(p, {{"x", kBlue}, {"y", kRed}, {"theta", kGreen}, {"log-linear model", kGrey}});

  const auto dev = series(n, [&](std::size_t k) { return V2(trace.t[k], std::max(trace.deviation[k], 1e-18)); });
  Bounds b = bounds_of({dev});
  b.y0 = std::max(b.y0, 1e-18);
  b.y1 = std::max(b.y1 * 10.0, b.y0 * 10.0);
  p = fig.panel(910, 40, 320, 320, b, "deviation d(t)", "t [s]", "d", false, true);
  fig.polyline(p, dev, {kBlue, "none", 1.0, 1.0});
  return fig.str();
}

std::string invariant_svg(const InvariantEllipsoid& inversion, const InvariantEllipsoid* no_inversion,
                          const std::string& title) {
  svg::Figure fig(1260, 420);
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  const char* names[3] = {"zeta_x", "zeta_y", "zeta_theta"};
  for (int v = 0; v < 3; ++v) {
    const int i = pairs[v][0], j = pairs[v][1];
    const auto a = shadow(inversion.P, i, j);
    std::vector<std::vector<V2>> sets{a};
    if (no_inversion) sets.push_back(shadow(no_inversion->P, i, j));
    const int p = fig.panel(70 + 410.0 * v, 40, 340, 320, bounds_of(sets).padded(0.08),
                            v == 0 ? title + ": invariant set" : std::string(), names[i], names[j], true);
    if (no_inversion) fig.polygon(p, sets[1], {kRed, kRed, 1.5, 0.15});
    fig.polygon(p, a, {kBlue, kBlue, 1.5, 0.25});
    if (v == 0) {
      std::vector<std::pair<std::string, std::string>> legend{{"with inversion", kBlue}};
      if (no_inversion) legend.emplace_back("without inversion", kRed);
      fig.legend(p, legend);
    }
  }
  return fig.str();
}

std::string flowpipe_svg(const ReferenceTrajectory& traj, const std::vector<FlowPipeSegment>& pipe,
                         const std::vector<Obstacle>& obstacles, const std::vector<Trace>& traces,
                         const SafetyReport* report, const std::string& title) {
  const auto ref = series(1001, [&](std::size_t k) {
    return traj.position(traj.t_begin() + (traj.t_end() - traj.t_begin()) * static_cast<double>(k) / 1000.0);
  });
  std::vector<std::vector<V2>> sets{ref};
  for (const auto& s : pipe) sets.push_back(s.polygon.vertices());
  for (const auto& o : obstacles) sets.push_back(o.polygon.vertices());

  svg::Figure fig(1260, 560);
  const int p = fig.panel(70, 40, 1160, 470, bounds_of(sets).padded(0.03), title + ": flow pipe", "x [m]", "y [m]",
                          true);
  std::vector<bool> hit(pipe.size(), false), hit_obs(obstacles.size(), false);
  if (report) {
    for (const Collision& c : report->collisions) {
      hit[c.segment] = true;
      hit_obs[c.obstacle] = true;
    }
  }
  for (std::size_t o = 0; o < obstacles.size(); ++o) {
    fig.polygon(p, obstacles[o].polygon.vertices(), {"#1a7f1a", hit_obs[o] ? kRed : kGreen, 1.0, 0.6});
  }
  for (std::size_t s = 0; s < pipe.size(); ++s) {
    fig.polygon(p, pipe[s].polygon.vertices(), {hit[s] ? kRed : kBlue, hit[s] ? kRed : kBlue, 0.6, 0.12});
  }
  for (const Trace& tr : traces) {
    fig.polyline(p, series(tr.size(), [&](std::size_t k) { return V2(tr.X[k].translation()); }, 400),
                 {"#ff7f0e", "none", 0.6, 0.5});
  }
  fig.polyline(p, ref, {"#000", "none", 1.0, 1.0});
  std::vector<std::pair<std::string, std::string>> legend{{"reference", "#000"}, {"pipe segments", kBlue},
                                                          {"obstacles", kGreen}};
  if (!traces.empty()) legend.emplace_back("disturbed runs", "#ff7f0e");
  if (report && !report->safe) legend.emplace_back("collision", kRed);
  fig.legend(p, legend);
  return fig.str();
}

}  // namespace loglin::app
