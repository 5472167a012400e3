#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "headteleop/config.hpp"
#include "headteleop/episode.hpp"
#include "headteleop/script.hpp"
#include "headteleop/trace.hpp"
#include "server.hpp"

namespace headteleop::cli {
namespace {

ServiceConfig resolve_config(const CommonOptions& opts) {
  std::optional<std::string> path = opts.config_path;
  if (!path) {
    if (const char* env = std::getenv("HEADTELEOP_CONFIG"); env != nullptr && *env != '\0') path = env;
  }
  ServiceConfig cfg = path ? load_config(*path) : ServiceConfig{};
  apply_env_overrides(cfg);
  return cfg;
}

std::string format_final_state(const RobotState& r) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  os << "final.base_x=" << r.base_x << '\n'
     << "final.base_y=" << r.base_y << '\n'
     << "final.heading=" << r.heading << '\n'
     << "final.lift=" << r.lift << '\n'
     << "final.arm_ext=" << r.arm_ext << '\n'
     << "final.wrist_pitch=" << r.wrist_pitch << '\n'
     << "final.wrist_yaw=" << r.wrist_yaw << '\n'
     << "final.grip=" << r.grip << '\n'
     << "final.held=" << r.held_object.value_or("-") << '\n';
  return os.str();
}

struct Evaluated {
  ReplayResult result;
};

// Output is assembled first so a failure never leaves partial stdout.
std::optional<Evaluated> evaluate(const ReplayOptions& opts, std::ostream& err) {
  try {
    const ServiceConfig cfg = resolve_config(opts);
    const Trace trace = read_trace_file(opts.trace_path);
    std::string scenario_id = cfg.scenario;
    if (trace.header && !trace.header->scenario.empty()) scenario_id = trace.header->scenario;
    if (opts.scenario) scenario_id = *opts.scenario;
    const Scenario scenario = load_scenario(scenario_id);
    Evaluated ev{replay(trace, scenario, cfg.session, cfg.limits)};
    if (ev.result.config_mismatch) {
      err << "warning: trace was recorded under a different configuration (cfg="
          << trace.header->config_hash << ", current=" << config_hash(cfg.session, cfg.limits)
          << ")\n";
    }
    return ev;
  } catch (const CorruptTrace& e) {
    err << "error: corrupt trace " << opts.trace_path << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return std::nullopt;
}

}  // namespace

int replay(const ReplayOptions& opts, std::ostream& out, std::ostream& err) {
  const auto ev = evaluate(opts, err);
  if (!ev) return kExitBadInput;
  out << format_metrics(ev->result.metrics) << format_final_state(ev->result.robot);
  return ev->result.metrics.completed ? kExitCompleted : kExitNotCompleted;
}

int metrics(const ReplayOptions& opts, std::ostream& out, std::ostream& err) {
  const auto ev = evaluate(opts, err);
  if (!ev) return kExitBadInput;
  out << format_metrics(ev->result.metrics);
  return kExitCompleted;
}

int simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const ServiceConfig cfg = resolve_config(opts);
    const Scenario scenario = load_scenario(opts.scenario);
    const Script script = read_script_file(opts.script_path);
    const auto records = synthesize_records(script);

    Trace trace;
    trace.header = TraceHeader{scenario.id, config_hash(cfg.session, cfg.limits), std::nullopt};
    trace.records = records;
    const ReplayResult result = headteleop::replay(trace, scenario, cfg.session, cfg.limits);

    if (opts.emit_trace) {
      std::ofstream file(*opts.emit_trace);
      if (!file) {
        err << "error: cannot write trace " << *opts.emit_trace << '\n';
        return kExitBadInput;
      }
      write_trace(file, trace);
    }
    out << format_metrics(result.metrics) << format_final_state(result.robot);
    return result.metrics.completed ? kExitCompleted : kExitNotCompleted;
  } catch (const MalformedScript& e) {
    err << "error: malformed script " << opts.script_path << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitBadInput;
}

int serve(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  ServiceConfig cfg;
  try {
    cfg = resolve_config(opts);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  try {
    service::Server server(cfg);
    server.on_session_closed([&out](const service::SessionSummary& s) {
      out << "session " << s.id << " closed: completed=" << (s.metrics.completed ? "true" : "false")
          << " task_time_s=" << s.metrics.task_time_s;
      if (!s.trace_path.empty()) out << " trace=" << s.trace_path;
      out << std::endl;
    });
    server.start();
    out << "listening on ws://" << cfg.listen_address << ':' << server.port() << " scenario="
        << cfg.scenario << " cfg=" << config_hash(cfg.session, cfg.limits) << std::endl;
    server.run();
  } catch (const service::BindFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitBindFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  return 0;
}

}  // namespace headteleop::cli
