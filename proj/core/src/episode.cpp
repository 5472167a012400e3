#include "headteleop/episode.hpp"

#include <cmath>
#include <sstream>

namespace headteleop {

std::string format_metrics(const TaskMetrics& m) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << "completed=" << (m.completed ? "true" : "false") << '\n';
  os << "task_time_s=" << m.task_time_s << '\n';
  os << "mode_switches=" << m.mode_switches << '\n';
  os << "resets=" << m.resets << '\n';
  os.precision(6);
  os << "commanded_distance=" << m.commanded_distance << '\n';
  os << "nonzero_command_fraction=" << m.nonzero_command_fraction << '\n';
  os << "ticks=" << m.ticks << '\n';
  return os.str();
}

Episode::Episode(Scenario scenario, SessionConfig session_cfg, ActuatorLimits limits, bool gated)
    : scenario_(std::move(scenario)),
      session_(session_cfg),
      limits_(limits),
      gated_(gated),
      world_(scenario_.initial_world()),
      time_limit_ms_(static_cast<std::uint32_t>(std::llround(scenario_.time_limit_s * 1000.0))) {
  metrics_.task_time_s = scenario_.time_limit_s;
}

void Episode::advance_to(std::uint32_t t_ms) {
  const std::uint32_t end = std::min(t_ms, time_limit_ms_);
  while (now_ms_ + kTickPeriodMs <= end) run_tick(now_ms_ + kTickPeriodMs);
}

std::optional<EventOutcome> Episode::apply(const TraceRecord& record) {
  const std::uint32_t t = record_time(record);
  if (t > 0) advance_to(t - 1);
  if (t > time_limit_ms_) return std::nullopt;

  std::optional<EventOutcome> outcome;
  std::visit(
      [&](const auto& rec) {
        using T = std::decay_t<decltype(rec)>;
        if constexpr (std::is_same_v<T, OrientationSample>) {
          session_.ingest_sample(rec);
        } else if constexpr (std::is_same_v<T, ControlEvent>) {
          outcome = session_.handle_event(rec, gated_);
          if (*outcome == EventOutcome::Accepted && rec.kind != EventKind::Start &&
              rec.kind != EventKind::Unrecognized) {
            ++metrics_.mode_switches;
          }
        } else {
          // The clock keeps running through a reset.
          world_ = scenario_.initial_world();
          wipe_ = {};
          ++metrics_.resets;
        }
      },
      record);
  return outcome;
}

void Episode::run_tick(std::uint32_t t_ms) {
  TickInfo info;
  info.frame = session_.tick(t_ms);
  info.gate = session_.last_gate();

  auto result = step(world_, info.frame, kTickDt, limits_);
  if (auto* report = std::get_if<StepReport>(&result)) {
    info.clamped = report->clamped;
    info.attached = std::move(report->attached);
    info.released = std::move(report->released);
  }

  now_ms_ = t_ms;
  last_frame_ = info.frame;
  ++metrics_.ticks;
  if (!info.frame.is_zero()) ++nonzero_ticks_;
  metrics_.commanded_distance += std::abs(info.frame[Actuator::BaseTranslate]) * kTickDt;
  metrics_.nonzero_command_fraction =
      static_cast<double>(nonzero_ticks_) / static_cast<double>(metrics_.ticks);

  update_wipe_progress(scenario_, world_, wipe_);
  if (!metrics_.completed && check_success(scenario_, world_, wipe_)) {
    metrics_.completed = true;
    metrics_.task_time_s = static_cast<double>(t_ms) / 1000.0;
    info.success_now = true;
  }

  if (observer_) observer_(info);
}

ReplayResult replay(const Trace& trace, const Scenario& scenario, const SessionConfig& session_cfg,
                    const ActuatorLimits& limits) {
  ReplayResult out;
  if (trace.header && !trace.header->config_hash.empty()) {
    out.config_mismatch = trace.header->config_hash != config_hash(session_cfg, limits);
  }
  Episode ep(scenario, session_cfg, limits, /*gated=*/false);
  std::uint32_t last_t = 0;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const std::uint32_t t = record_time(trace.records[i]);
    if (t < last_t) {
      throw CorruptTrace("record " + std::to_string(i + 1) + " is out of order",
                         static_cast<int>(i + 1));
    }
    last_t = t;
    ep.apply(trace.records[i]);
  }
  if (!trace.records.empty()) ep.advance_to(record_time(trace.records.back()));
  out.world = ep.world();
  out.robot = ep.world().robot;
  out.metrics = ep.metrics();
  return out;
}

TaskMetrics compute_metrics(const Trace& trace, const Scenario& scenario,
                            const SessionConfig& session_cfg, const ActuatorLimits& limits) {
  return replay(trace, scenario, session_cfg, limits).metrics;
}

}  // namespace headteleop
