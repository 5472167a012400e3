#pragma once

// Kinematic model of a Stretch-class mobile manipulator.
//
// World frame: x forward at heading 0, y to the left, z up. The base is a
// differential drive; the telescoping arm sticks out of the robot's right
// side, perpendicular to the drive direction, at height `lift`.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "headteleop/actuator.hpp"

namespace headteleop {

struct Pose3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Pose3&, const Pose3&) = default;
};

double distance(const Pose3& a, const Pose3& b);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return lo <= v && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct ActuatorLimits {
  double lift_max = 1.1;
  double ext_max = 0.52;
  Interval wrist_pitch{-1.5707963267948966, 1.5707963267948966};
  Interval wrist_yaw{-1.5707963267948966, 1.5707963267948966};
  double arm_base_offset = 0.2;

  // Grasp model, with hysteresis between attach and release.
  double grasp_close_threshold = 0.3;
  double release_threshold = 0.7;
  double grasp_radius = 0.08;

  bool valid() const;

  friend bool operator==(const ActuatorLimits&, const ActuatorLimits&) = default;
};

struct RobotState {
  double base_x = 0.0;
  double base_y = 0.0;
  double heading = 0.0;  // rad, counter-clockwise from +x
  double lift = 0.0;
  double arm_ext = 0.0;
  double wrist_pitch = 0.0;
  double wrist_yaw = 0.0;
  double grip = 0.0;  // 0 closed, 1 open
  std::optional<std::string> held_object;

  friend bool operator==(const RobotState&, const RobotState&) = default;
};

/// Homed pose every scenario starts from.
RobotState home_state();

struct EndEffector {
  Pose3 position;
  double yaw = 0.0;    // world-frame tool yaw, rad
  double pitch = 0.0;  // wrist pitch, rad
};

EndEffector end_effector_pose(const RobotState& state, const ActuatorLimits& limits = {});

/// True iff every joint lies in its limit interval.
bool within_limits(const RobotState& state, const ActuatorLimits& limits);

struct SimObject {
  std::string id;
  Pose3 pose;
  bool attachable = true;

  friend bool operator==(const SimObject&, const SimObject&) = default;
};

struct WorldState {
  RobotState robot;
  std::vector<SimObject> objects;

  const SimObject* find(const std::string& id) const;
  SimObject* find(const std::string& id);

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

enum class StepError : std::uint8_t { NonFiniteCommand, NonPositiveDt };

struct ClampSet {
  std::array<bool, kActuatorCount> hit{};

  bool any() const;
  bool contains(Actuator a) const { return hit[index_of(a)]; }
  void insert(Actuator a) { hit[index_of(a)] = true; }
  std::vector<Actuator> members() const;

  friend bool operator==(const ClampSet&, const ClampSet&) = default;
};

struct StepReport {
  ClampSet clamped;  // actuators whose commanded motion was cut by a limit
  std::optional<std::string> attached;
  std::optional<std::string> released;
};

/// Explicit Euler step of the robot joints only (no objects).
std::variant<RobotState, StepError> step(const RobotState& state, const CommandFrame& frame,
                                         double dt, const ActuatorLimits& limits = {},
                                         ClampSet* clamped = nullptr);

/// Robot step plus grasp/release and held-object co-motion. On error the
/// world is left untouched.
std::variant<StepReport, StepError> step(WorldState& world, const CommandFrame& frame, double dt,
                                         const ActuatorLimits& limits = {});

/// Joints that sit on a limit after the step but did not before it.
ClampSet clamp_report(const RobotState& before, const RobotState& after,
                      const ActuatorLimits& limits = {});

}  // namespace headteleop
