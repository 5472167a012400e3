#include "headteleop/session.hpp"

#include <cmath>
#include <cstdint>

#include "headteleop/angles.hpp"

namespace headteleop {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Drive:
      return "drive";
    case Mode::Arm:
      return "arm";
    case Mode::Wrist:
      return "wrist";
    case Mode::Gripper:
      return "gripper";
  }
  return "drive";
}

std::string_view to_string(Phase p) {
  return p == Phase::Active ? "active" : "uncalibrated";
}

std::string_view to_string(EventOutcome o) {
  switch (o) {
    case EventOutcome::Accepted:
      return "accepted";
    case EventOutcome::Repeat:
      return "repeat";
    case EventOutcome::NotListening:
      return "not_listening";
    case EventOutcome::NoSampleYet:
      return "no_sample_yet";
    case EventOutcome::Ignored:
      return "ignored";
  }
  return "repeat";
}

std::string_view to_string(TickGate g) {
  switch (g) {
    case TickGate::Uncalibrated:
      return "uncalibrated";
    case TickGate::Listening:
      return "listening";
    case TickGate::LinkLost:
      return "link_lost";
    case TickGate::Deadzone:
      return "deadzone";
    case TickGate::Moving:
      return "moving";
  }
  return "uncalibrated";
}

// --- ShakeDetector ----------------------------------------------------------

void ShakeDetector::reset() {
  window_.clear();
  reversal_count_ = 0;
  last_fire_ms_.reset();
  last_yaw_.reset();
  path_ = 0.0;
}

int ShakeDetector::count_reversals() const {
  if (window_.empty()) return 0;
  const double h = cfg_.reversal_hysteresis_deg;
  const double first = window_.front().path;
  double lo = first;
  double hi = first;
  double extreme = first;
  int dir = 0;
  int reversals = 0;
  for (const auto& p : window_) {
    const double y = p.path;
    if (dir == 0) {
      lo = std::min(lo, y);
      hi = std::max(hi, y);
      if (y - lo >= h) {
        dir = 1;
        extreme = y;
      } else if (hi - y >= h) {
        dir = -1;
        extreme = y;
      }
    } else if (dir > 0) {
      if (y > extreme) {
        extreme = y;
      } else if (extreme - y >= h) {
        dir = -1;
        extreme = y;
        ++reversals;
      }
    } else {
      if (y < extreme) {
        extreme = y;
      } else if (y - extreme >= h) {
        dir = 1;
        extreme = y;
        ++reversals;
      }
    }
  }
  return reversals;
}

bool ShakeDetector::update(const OrientationSample& sample, double yaw_ref) {
  const std::uint32_t now = sample.t_ms;
  const double yaw = sample.yaw;
  if (last_yaw_) path_ += normalize_delta(yaw, *last_yaw_);
  last_yaw_ = yaw;
  window_.push_back({now, normalize_delta(yaw, yaw_ref), path_});
  while (!window_.empty() && now - window_.front().t_ms > cfg_.window_ms) window_.pop_front();

  reversal_count_ = count_reversals();

  if (last_fire_ms_ && now - *last_fire_ms_ < cfg_.refractory_ms) return false;

  bool amplitude = false;
  for (const auto& p : window_) {
    if (std::abs(p.yaw_delta) >= cfg_.amplitude_deg) {
      amplitude = true;
      break;
    }
  }
  if (!amplitude || reversal_count_ < cfg_.reversals) return false;

  last_fire_ms_ = now;
  window_.clear();
  reversal_count_ = 0;
  return true;
}

// --- dispatch ---------------------------------------------------------------

CommandFrame dispatch(Mode mode, double roll_v, double pitch_v) {
  CommandFrame f;
  switch (mode) {
    case Mode::Drive:
      f[Actuator::BaseTranslate] = pitch_v;
      f[Actuator::BaseRotate] = roll_v;
      break;
    case Mode::Arm:
      // Head down is positive pitch; the lift follows the head, so it lowers.
      f[Actuator::Lift] = -pitch_v;
      f[Actuator::ArmExtend] = roll_v;
      break;
    case Mode::Wrist:
      f[Actuator::WristPitch] = pitch_v;
      f[Actuator::WristYaw] = roll_v;
      break;
    case Mode::Gripper:
      f[Actuator::Gripper] = pitch_v;
      break;
  }
  // Normalize -0.0 so "absent" has a single representation.
  for (double& v : f.velocity) {
    if (v == 0.0) v = 0.0;
  }
  return f;
}

CommandFrame stop_all(std::uint32_t t_ms) {
  CommandFrame f;
  f.t_ms = t_ms;
  return f;
}

// --- Session ----------------------------------------------------------------

Session::Session(SessionConfig cfg) : cfg_(cfg), shake_(cfg.shake) {}

bool Session::ingest_sample(const OrientationSample& sample) {
  const OrientationSample s = normalized(sample);
  latest_ = s;
  if (!yaw_ref_) yaw_ref_ = static_cast<double>(s.yaw);
  expire_listening(s.t_ms);
  if (shake_.update(s, *yaw_ref_)) {
    awaiting_ = true;
    awaiting_since_ms_ = s.t_ms;
    return true;
  }
  return false;
}

void Session::expire_listening(std::uint32_t now_ms) {
  if (awaiting_ && now_ms >= awaiting_since_ms_ &&
      now_ms - awaiting_since_ms_ > cfg_.listen_timeout_ms) {
    awaiting_ = false;
  }
}

EventOutcome Session::handle_event(const ControlEvent& event, bool gated) {
  if (gated && !awaiting_) return EventOutcome::NotListening;
  awaiting_ = false;

  switch (event.kind) {
    case EventKind::Unrecognized:
      return EventOutcome::Repeat;
    case EventKind::Start: {
      if (!latest_) return EventOutcome::NoSampleYet;
      if (phase_ == Phase::Active && !cfg_.recalibrate_on_start) return EventOutcome::Ignored;
      calibration_ = calibrate(*latest_);
      yaw_ref_ = static_cast<double>(latest_->yaw);
      phase_ = Phase::Active;
      mode_ = Mode::Drive;
      return EventOutcome::Accepted;
    }
    case EventKind::SwitchDrive:
    case EventKind::SwitchArm:
    case EventKind::SwitchWrist:
    case EventKind::SwitchGripper:
      // Switching is meaningless before calibration; treat like "repeat".
      if (phase_ != Phase::Active) return EventOutcome::Repeat;
      mode_ = event.kind == EventKind::SwitchDrive ? Mode::Drive
              : event.kind == EventKind::SwitchArm ? Mode::Arm
              : event.kind == EventKind::SwitchWrist ? Mode::Wrist
                                                     : Mode::Gripper;
      return EventOutcome::Accepted;
  }
  return EventOutcome::Repeat;
}

CommandFrame Session::tick(std::uint32_t now_ms) {
  expire_listening(now_ms);
  CommandFrame frame = stop_all(now_ms);

  if (phase_ != Phase::Active || !calibration_) {
    last_gate_ = TickGate::Uncalibrated;
    return frame;
  }
  if (awaiting_) {
    last_gate_ = TickGate::Listening;
    return frame;
  }
  if (!latest_ || static_cast<std::int64_t>(now_ms) - static_cast<std::int64_t>(latest_->t_ms) >
                      static_cast<std::int64_t>(cfg_.watchdog_ms)) {
    last_gate_ = TickGate::LinkLost;
    return frame;
  }

  const auto& m = cfg_.mapping;
  if (in_deadzone(latest_->roll, latest_->pitch, *calibration_, m.roll, m.pitch)) {
    last_gate_ = TickGate::Deadzone;
    return frame;
  }

  // Each axis uses the gain of the actuator it feeds in this mode.
  Actuator roll_target = Actuator::BaseRotate;
  Actuator pitch_target = Actuator::BaseTranslate;
  switch (mode_) {
    case Mode::Drive:
      break;
    case Mode::Arm:
      roll_target = Actuator::ArmExtend;
      pitch_target = Actuator::Lift;
      break;
    case Mode::Wrist:
      roll_target = Actuator::WristYaw;
      pitch_target = Actuator::WristPitch;
      break;
    case Mode::Gripper:
      roll_target = Actuator::Gripper;  // unused by dispatch
      pitch_target = Actuator::Gripper;
      break;
  }
  const double roll_v = axis_velocity(latest_->roll, calibration_->roll, m.roll, m.params(roll_target));
  const double pitch_v =
      axis_velocity(latest_->pitch, calibration_->pitch, m.pitch, m.params(pitch_target));

  frame = dispatch(mode_, roll_v, pitch_v);
  frame.t_ms = now_ms;
  last_gate_ = frame.is_zero() ? TickGate::Deadzone : TickGate::Moving;
  return frame;
}

}  // namespace headteleop
