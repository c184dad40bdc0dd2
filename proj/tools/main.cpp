// loglin: simulate | invariant | flowpipe | verify on a scenario file.
#include <exception>
#include <functional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/cfg/env.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "loglin/errors.hpp"

int main(int argc, char** argv) {
  using namespace loglin::app;

  // Diagnostics go to stderr; stdout carries only the one-line result.
  spdlog::set_default_logger(spdlog::stderr_color_mt("loglin"));
  spdlog::set_level(spdlog::level::warn);
  spdlog::cfg::load_env_levels();  // SPDLOG_LEVEL=info|debug|...

  CLI::App app{"Log-linear SE(2) tracking: simulation, invariant sets and flow-pipe verification"};
  app.require_subcommand(1);

  CliOptions opts;
  std::uint64_t seed = 0;
  double dt = 0.0;
  std::function<int(const CliOptions&)> command;

  const auto add = [&](const char* name, const char* help, int (*fn)(const CliOptions&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--scenario", opts.scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out, "output directory")->capture_default_str();
    sub->add_option("--dt", dt, "integration step [s], overrides the scenario");
    sub->add_option("--seed", seed, "random seed, overrides the scenario");
    sub->add_flag("--no-inversion", opts.no_inversion, "use the no-inversion control law");
    sub->callback([&, sub, fn] {
      if (sub->count("--dt") > 0) opts.dt = dt;
      if (sub->count("--seed") > 0) opts.seed = seed;
      command = fn;
    });
  };
  add("simulate", "closed-loop simulation: trace CSV and deviation figure", cmd_simulate);
  add("invariant", "invariant ellipsoids with and without dynamic inversion", cmd_invariant);
  add("flowpipe", "flow pipe with Monte Carlo overlay", cmd_flowpipe);
  add("verify", "obstacle check; exit 0 = SAFE, 2 = UNSAFE", cmd_verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    return command(opts);
  } catch (const loglin::Error& e) {
    spdlog::error("{}", e.what());
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitError;
  }
}
