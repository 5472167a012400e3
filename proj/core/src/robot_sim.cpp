#include "headteleop/robot_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "headteleop/angles.hpp"

namespace headteleop {
namespace {

// Integrates q += v*dt and clamps. Reports a clamp only when the unclamped
// value left the interval.
double integrate(double q, double v, double dt, double lo, double hi, bool& clamped) {
  const double next = q + v * dt;
  const double out = std::clamp(next, lo, hi);
  clamped = out != next;
  return out;
}

}  // namespace

double distance(const Pose3& a, const Pose3& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

bool ActuatorLimits::valid() const {
  return lift_max > 0.0 && ext_max > 0.0 && wrist_pitch.lo < wrist_pitch.hi &&
         wrist_yaw.lo < wrist_yaw.hi && arm_base_offset >= 0.0 && grasp_radius > 0.0 &&
         0.0 < grasp_close_threshold && grasp_close_threshold < release_threshold &&
         release_threshold < 1.0;
}

RobotState home_state() {
  RobotState s;
  s.lift = 0.5;
  s.arm_ext = 0.0;
  s.wrist_pitch = 0.0;
  s.wrist_yaw = 0.0;
  s.grip = 0.5;
  return s;
}

EndEffector end_effector_pose(const RobotState& state, const ActuatorLimits& limits) {
  const double reach = limits.arm_base_offset + state.arm_ext;
  // Rotation of the lateral offset (0, -reach) by heading.
  EndEffector ee;
  ee.position.x = state.base_x + reach * std::sin(state.heading);
  ee.position.y = state.base_y - reach * std::cos(state.heading);
  ee.position.z = state.lift;
  ee.yaw = state.heading - kPi / 2.0 + state.wrist_yaw;
  ee.pitch = state.wrist_pitch;
  return ee;
}

bool within_limits(const RobotState& s, const ActuatorLimits& l) {
  return 0.0 <= s.lift && s.lift <= l.lift_max && 0.0 <= s.arm_ext && s.arm_ext <= l.ext_max &&
         l.wrist_pitch.contains(s.wrist_pitch) && l.wrist_yaw.contains(s.wrist_yaw) &&
         0.0 <= s.grip && s.grip <= 1.0;
}

const SimObject* WorldState::find(const std::string& id) const {
  for (const auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

SimObject* WorldState::find(const std::string& id) {
  for (auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

bool ClampSet::any() const {
  return std::any_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

std::vector<Actuator> ClampSet::members() const {
  std::vector<Actuator> out;
  for (Actuator a : kAllActuators) {
    if (contains(a)) out.push_back(a);
  }
  return out;
}

std::variant<RobotState, StepError> step(const RobotState& state, const CommandFrame& frame,
                                         double dt, const ActuatorLimits& limits,
                                         ClampSet* clamped) {
  if (!(dt > 0.0) || !std::isfinite(dt)) return StepError::NonPositiveDt;
  for (double v : frame.velocity) {
    if (!std::isfinite(v)) return StepError::NonFiniteCommand;
  }

  RobotState next = state;
  ClampSet hits;

  const double v = frame[Actuator::BaseTranslate];
  // BaseRotate is clockwise-positive; heading is counter-clockwise.
  const double omega = -frame[Actuator::BaseRotate];
  next.base_x = state.base_x + v * std::cos(state.heading) * dt;
  next.base_y = state.base_y + v * std::sin(state.heading) * dt;
  next.heading = state.heading + omega * dt;

  bool c = false;
  next.lift = integrate(state.lift, frame[Actuator::Lift], dt, 0.0, limits.lift_max, c);
  if (c) hits.insert(Actuator::Lift);
  next.arm_ext = integrate(state.arm_ext, frame[Actuator::ArmExtend], dt, 0.0, limits.ext_max, c);
  if (c) hits.insert(Actuator::ArmExtend);
  next.wrist_pitch = integrate(state.wrist_pitch, frame[Actuator::WristPitch], dt,
                               limits.wrist_pitch.lo, limits.wrist_pitch.hi, c);
  if (c) hits.insert(Actuator::WristPitch);
  next.wrist_yaw = integrate(state.wrist_yaw, frame[Actuator::WristYaw], dt, limits.wrist_yaw.lo,
                             limits.wrist_yaw.hi, c);
  if (c) hits.insert(Actuator::WristYaw);
  next.grip = integrate(state.grip, frame[Actuator::Gripper], dt, 0.0, 1.0, c);
  if (c) hits.insert(Actuator::Gripper);

  if (clamped != nullptr) *clamped = hits;
  return next;
}

std::variant<StepReport, StepError> step(WorldState& world, const CommandFrame& frame, double dt,
                                         const ActuatorLimits& limits) {
  StepReport report;
  auto result = step(world.robot, frame, dt, limits, &report.clamped);
  if (const auto* err = std::get_if<StepError>(&result)) return *err;

  const RobotState before = world.robot;
  RobotState next = std::get<RobotState>(std::move(result));
  const Pose3 ee = end_effector_pose(next, limits).position;

  if (next.held_object) {
    if (next.grip > limits.release_threshold) {
      // Dropped where the tool is.
      if (auto* obj = world.find(*next.held_object)) obj->pose = ee;
      report.released = next.held_object;
      next.held_object.reset();
    }
  } else if (before.grip >= limits.grasp_close_threshold &&
             next.grip < limits.grasp_close_threshold) {
    const SimObject* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& o : world.objects) {
      if (!o.attachable) continue;
      const double d = distance(o.pose, ee);
      if (d <= limits.grasp_radius && d < best_d) {
        best = &o;
        best_d = d;
      }
    }
    if (best != nullptr) {
      next.held_object = best->id;
      report.attached = best->id;
    }
  }

  if (next.held_object) {
    if (auto* obj = world.find(*next.held_object)) obj->pose = ee;
  }
  world.robot = std::move(next);
  return report;
}

ClampSet clamp_report(const RobotState& before, const RobotState& after,
                      const ActuatorLimits& limits) {
  ClampSet out;
  auto check = [&](Actuator a, double b, double v, double lo, double hi) {
    const bool on_after = v == lo || v == hi;
    const bool on_before = b == v;
    if (on_after && !on_before) out.insert(a);
  };
  check(Actuator::Lift, before.lift, after.lift, 0.0, limits.lift_max);
  check(Actuator::ArmExtend, before.arm_ext, after.arm_ext, 0.0, limits.ext_max);
  check(Actuator::WristPitch, before.wrist_pitch, after.wrist_pitch, limits.wrist_pitch.lo,
        limits.wrist_pitch.hi);
  check(Actuator::WristYaw, before.wrist_yaw, after.wrist_yaw, limits.wrist_yaw.lo,
        limits.wrist_yaw.hi);
  check(Actuator::Gripper, before.grip, after.grip, 0.0, 1.0);
  return out;
}

}  // namespace headteleop
