#pragma once

// Drives one task attempt: a time-ordered stream of samples, events and
// resets goes in, 10 Hz control ticks step the robot, and task metrics come
// out. Replay, scripted simulation and live sessions all run through here so
// the same input stream yields the same result regardless of transport.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "headteleop/config.hpp"
#include "headteleop/robot_sim.hpp"
#include "headteleop/scenario.hpp"
#include "headteleop/session.hpp"
#include "headteleop/trace.hpp"

namespace headteleop {

inline constexpr std::uint32_t kTickPeriodMs = 100;
inline constexpr double kTickDt = 0.1;

struct TaskMetrics {
  double task_time_s = kDefaultTimeLimitS;
  bool completed = false;
  int mode_switches = 0;
  int resets = 0;
  double commanded_distance = 0.0;  // m, sum of |BaseTranslate| * dt
  double nonzero_command_fraction = 0.0;
  std::uint64_t ticks = 0;

  friend bool operator==(const TaskMetrics&, const TaskMetrics&) = default;
};

/// `key=value` lines, fixed order.
std::string format_metrics(const TaskMetrics& m);

struct TickInfo {
  CommandFrame frame;
  TickGate gate = TickGate::Uncalibrated;
  ClampSet clamped;
  std::optional<std::string> attached;
  std::optional<std::string> released;
  bool success_now = false;  // first tick that satisfied the task
};

class Episode {
 public:
  /// `gated`: command tokens need a preceding head shake (live sessions).
  Episode(Scenario scenario, SessionConfig session_cfg, ActuatorLimits limits, bool gated);

  /// Runs every tick due strictly before the record's time, then applies it.
  /// Samples are expected in canonical (trace-rounded) form. Returns the
  /// event outcome for event records.
  std::optional<EventOutcome> apply(const TraceRecord& record);

  /// Runs every tick with time <= t_ms (capped at the time limit).
  void advance_to(std::uint32_t t_ms);

  const TaskMetrics& metrics() const { return metrics_; }
  const WorldState& world() const { return world_; }
  const Session& session() const { return session_; }
  const Scenario& scenario() const { return scenario_; }
  const ActuatorLimits& limits() const { return limits_; }
  std::uint32_t now_ms() const { return now_ms_; }
  std::uint32_t time_limit_ms() const { return time_limit_ms_; }
  const CommandFrame& last_frame() const { return last_frame_; }
  const WipeProgress& wipe_progress() const { return wipe_; }

  void set_tick_observer(std::function<void(const TickInfo&)> cb) { observer_ = std::move(cb); }

 private:
  void run_tick(std::uint32_t t_ms);

  Scenario scenario_;
  Session session_;
  ActuatorLimits limits_;
  bool gated_;
  WorldState world_;
  WipeProgress wipe_;
  TaskMetrics metrics_;
  std::uint64_t nonzero_ticks_ = 0;
  std::uint32_t now_ms_ = 0;  // time of the last tick run
  std::uint32_t time_limit_ms_;
  CommandFrame last_frame_;
  std::function<void(const TickInfo&)> observer_;
};

struct ReplayResult {
  RobotState robot;
  WorldState world;
  TaskMetrics metrics;
  bool config_mismatch = false;
};

/// Replays a trace against a scenario. Deterministic for a given trace,
/// scenario and configuration.
ReplayResult replay(const Trace& trace, const Scenario& scenario, const SessionConfig& session_cfg,
                    const ActuatorLimits& limits);

TaskMetrics compute_metrics(const Trace& trace, const Scenario& scenario,
                            const SessionConfig& session_cfg = {}, const ActuatorLimits& limits = {});

}  // namespace headteleop
