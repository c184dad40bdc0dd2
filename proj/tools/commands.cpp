#include "commands.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <spdlog/spdlog.h>
#include "json.hpp"

#include "loglin/errors.hpp"
#include "loglin/export.hpp"

namespace loglin::app {
namespace {

using nlohmann::ordered_json;

ControlMode mode_of(bool no_inversion) {
  return no_inversion ? ControlMode::NoInversion : ControlMode::DynamicInversion;
}

// Sim horizon shared by the pipe grid and the Monte Carlo runs.
double horizon(const Scenario& s, const ReferenceTrajectory& traj) {
  return std::min(s.t_end, traj.t_end() - traj.t_begin());
}

}  // namespace

Scenario load(const CliOptions& opts) {
  Scenario s = load_scenario(opts.scenario);
  if (opts.dt) {
    if (!(*opts.dt > 0.0)) throw InvalidArgument("--dt must be positive");
    s.dt = *opts.dt;
  }
  if (opts.seed) s.seed = *opts.seed;
  return s;
}

Design design(const Scenario& scenario, bool need_no_inversion) {
  Design d{scenario, plan_reference(scenario), synthesize(scenario), {}, std::nullopt, {}};
  spdlog::info("LQR gain: Riccati residual {:.2e} after {} iterations", d.synthesis.riccati.residual,
               d.synthesis.riccati.iterations);
  d.inversion = algorithm1(d.synthesis.system);
  spdlog::info("inversion ellipsoid: {} iterations, sigma {:.6f}, gm semi-axis {:.6f}", d.inversion.iterations,
               d.inversion.sigma_final, d.inversion.ellipsoid.geometric_mean_semi_axis());
  if (need_no_inversion) {
    try {
      d.no_inversion = no_inversion_ellipsoid(d.synthesis.system, d.synthesis.control);
      spdlog::info("no-inversion ellipsoid: {} iterations, gm semi-axis {:.6f}", d.no_inversion->iterations,
                   d.no_inversion->ellipsoid.geometric_mean_semi_axis());
    } catch (const AngleWrap& e) {
      d.no_inversion_failure = e.what();
    } catch (const NoConvergence& e) {
      d.no_inversion_failure = e.what();
    }
    if (!d.no_inversion) spdlog::warn("no-inversion ellipsoid unavailable: {}", d.no_inversion_failure);
  }
  return d;
}

const Algorithm1Result& selected(const Design& d, bool no_inversion) {
  if (!no_inversion) return d.inversion;
  if (!d.no_inversion) throw Error("no-inversion ellipsoid unavailable: " + d.no_inversion_failure);
  return *d.no_inversion;
}

PipeRun build_pipe(const Design& d, bool no_inversion, int runs) {
  const Scenario& s = d.scenario;
  const ReferenceTrajectory& traj = d.plan.trajectory;
  const InvariantEllipsoid& E = selected(d, no_inversion).ellipsoid;
  PipeRun run;
  const double t0 = traj.t_begin();
  run.pipe = build_flow_pipe(traj, E, window_grid(t0, t0 + horizon(s, traj), s.window), s.pipe);
  run.traces = run_indexed(static_cast<std::size_t>(std::max(runs, 0)), [&](std::size_t i) {
    return simulate_closed_loop(monte_carlo_sim(s, traj, d.synthesis.control, E, mode_of(no_inversion), i));
  });
  check_coverage(run);
  return run;
}

void check_coverage(PipeRun& run) {
  run.samples = 0;
  run.outside = 0;
  if (run.pipe.empty()) return;
  for (const Trace& tr : run.traces) {
    for (std::size_t k = 0; k < tr.size(); ++k) {
      const double t = tr.t[k];
      const Eigen::Vector2d p = tr.X[k].translation();
      // Window containing t; a sample on a shared knot may use either side.
      auto it = std::upper_bound(run.pipe.begin(), run.pipe.end(), t,
                                 [](double v, const FlowPipeSegment& s) { return v < s.t0; });
      std::size_t i = it == run.pipe.begin() ? 0 : static_cast<std::size_t>(it - run.pipe.begin()) - 1;
      bool inside = run.pipe[i].polygon.contains(p, 1e-9);
      if (!inside && i > 0 && t <= run.pipe[i - 1].t1 + 1e-12) inside = run.pipe[i - 1].polygon.contains(p, 1e-9);
      ++run.samples;
      if (!inside) ++run.outside;
    }
  }
}

int cmd_simulate(const CliOptions& opts) {
  const Scenario s = load(opts);
  const PlanResult plan = plan_reference(s);
  const Synthesis syn = synthesize(s);
  const SimConfig cfg = scenario_sim(s, plan.trajectory, syn.control, s.dt, mode_of(opts.no_inversion));
  const Trace trace = simulate_closed_loop(cfg);
  const double dev = trace.max_deviation();
  spdlog::info("simulated {} steps of {} s, max deviation {:.3e}", trace.size() - 1, s.dt, dev);

  write_text(opts.out / "trace.csv", trace_csv(trace));
  write_text(opts.out / "reference.csv", trajectory_csv(plan.trajectory, 0.01));
  write_text(opts.out / "simulate.svg", simulate_svg(trace, s.name));
  ordered_json summary;
  summary["scenario"] = s.name;
  summary["mode"] = opts.no_inversion ? "no-inversion" : "inversion";
  summary["dt"] = s.dt;
  summary["steps"] = trace.size() - 1;
  summary["max_deviation"] = dev;
  write_text(opts.out / "simulate.json", summary.dump(2) + "\n");
  fmt::print("max deviation {:.3e}\n", dev);
  return kExitOk;
}

int cmd_invariant(const CliOptions& opts) {
  const Design d = design(load(opts), true);
  const ControlConfig& cfg = d.synthesis.control;
  const SaturationBox box = saturation_box(d.inversion.ellipsoid, cfg, ControlMode::DynamicInversion);
  write_text(opts.out / "ellipsoid.json", ellipsoid_json(d.inversion, &box));

  ordered_json summary;
  summary["scenario"] = d.scenario.name;
  summary["inversion"] = {{"iterations", d.inversion.iterations},
                          {"geometric_mean_semi_axis", d.inversion.ellipsoid.geometric_mean_semi_axis()}};
  if (d.no_inversion) {
    const SaturationBox nbox = saturation_box(d.no_inversion->ellipsoid, cfg, ControlMode::NoInversion);
    write_text(opts.out / "ellipsoid_no_inversion.json", ellipsoid_json(*d.no_inversion, &nbox));
    const double ratio = d.no_inversion->ellipsoid.geometric_mean_semi_axis() /
                         d.inversion.ellipsoid.geometric_mean_semi_axis();
    summary["no_inversion"] = {{"iterations", d.no_inversion->iterations},
                               {"geometric_mean_semi_axis", d.no_inversion->ellipsoid.geometric_mean_semi_axis()}};
    summary["ratio"] = ratio;
    fmt::print("inversion gm {:.6f}, no-inversion gm {:.6f}, ratio {:.4f}\n",
               d.inversion.ellipsoid.geometric_mean_semi_axis(),
               d.no_inversion->ellipsoid.geometric_mean_semi_axis(), ratio);
  } else {
    summary["no_inversion"] = {{"error", d.no_inversion_failure}};
    summary["ratio"] = nullptr;
    fmt::print("inversion gm {:.6f}, no-inversion set unavailable\n",
               d.inversion.ellipsoid.geometric_mean_semi_axis());
  }
  write_text(opts.out / "invariant.json", summary.dump(2) + "\n");
  write_text(opts.out / "invariant.svg",
             invariant_svg(d.inversion.ellipsoid, d.no_inversion ? &d.no_inversion->ellipsoid : nullptr,
                           d.scenario.name));
  return kExitOk;
}

int cmd_flowpipe(const CliOptions& opts) {
  const Design d = design(load(opts), opts.no_inversion);
  const PipeRun run = build_pipe(d, opts.no_inversion, d.scenario.pipe_runs);
  spdlog::info("{} segments, {} Monte Carlo samples, {} outside their segment", run.pipe.size(), run.samples,
               run.outside);
  write_text(opts.out / "pipe.json", pipe_json(run.pipe));
  write_text(opts.out / "flowpipe.svg", flowpipe_svg(d.plan.trajectory, run.pipe, d.scenario.obstacles, run.traces,
                                                     nullptr, d.scenario.name));
  fmt::print("{} segments, {} of {} Monte Carlo samples outside\n", run.pipe.size(), run.outside, run.samples);
  return kExitOk;
}

int cmd_verify(const CliOptions& opts) {
  const Design d = design(load(opts), opts.no_inversion);
  const PipeRun run = build_pipe(d, opts.no_inversion, 0);
  const SafetyReport report = verify_safety(run.pipe, d.scenario.obstacles);
  write_text(opts.out / "report.json", report_json(report, d.scenario.obstacles));
  write_text(opts.out / "verify.svg",
             flowpipe_svg(d.plan.trajectory, run.pipe, d.scenario.obstacles, {}, &report, d.scenario.name));
  for (const Collision& c : report.collisions) {
    spdlog::info("segment {} [{:.2f}, {:.2f}] s hits {}", c.segment, c.t0, c.t1, d.scenario.obstacles[c.obstacle].name);
  }
  fmt::print("{}\n", report.safe ? "SAFE" : "UNSAFE");
  return report.safe ? kExitOk : kExitUnsafe;
}

}  // namespace loglin::app
