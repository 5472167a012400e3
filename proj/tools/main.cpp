#include <CLI11.hpp>

#include <iostream>

#include "service/commands.hpp"

int main(int argc, char** argv) {
  using namespace headteleop;

  CLI::App app{"Head-tilt teleoperation of a simulated mobile manipulator"};
  app.require_subcommand(1);

  cli::CommonOptions serve_opts;
  auto* serve = app.add_subcommand("serve", "Run the websocket endpoint for the web console");
  serve->add_option("--config", serve_opts.config_path, "Service config (YAML)");

  cli::ReplayOptions replay_opts;
  auto* replay = app.add_subcommand("replay", "Replay a trace; exit 0 iff the task completes");
  replay->add_option("trace", replay_opts.trace_path, "Trace file")->required();
  replay->add_option("--config", replay_opts.config_path, "Service config (YAML)");
  replay->add_option("--scenario", replay_opts.scenario, "Scenario id or file, overriding the trace header");

  cli::ReplayOptions metrics_opts;
  auto* metrics = app.add_subcommand("metrics", "Print task metrics for a trace");
  metrics->add_option("trace", metrics_opts.trace_path, "Trace file")->required();
  metrics->add_option("--config", metrics_opts.config_path, "Service config (YAML)");
  metrics->add_option("--scenario", metrics_opts.scenario, "Scenario id or file, overriding the trace header");

  cli::SimulateOptions sim_opts;
  auto* simulate = app.add_subcommand("simulate", "Run a scripted head-motion session headlessly");
  simulate->add_option("--scenario", sim_opts.scenario, "Scenario id or file")->required();
  simulate->add_option("--script", sim_opts.script_path, "Head-motion script")->required();
  simulate->add_option("--emit-trace", sim_opts.emit_trace, "Write the synthesized session as a trace");
  simulate->add_option("--config", sim_opts.config_path, "Service config (YAML)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitBadInput;
  }

  if (serve->parsed()) return cli::serve(serve_opts, std::cout, std::cerr);
  if (replay->parsed()) return cli::replay(replay_opts, std::cout, std::cerr);
  if (metrics->parsed()) return cli::metrics(metrics_opts, std::cout, std::cerr);
  return cli::simulate(sim_opts, std::cout, std::cerr);
}
