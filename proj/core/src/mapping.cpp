#include "headteleop/mapping.hpp"

#include <algorithm>

#include "headteleop/angles.hpp"

namespace headteleop {

double default_v_max(Actuator a) {
  switch (a) {
    case Actuator::BaseTranslate:
      return 0.3;
    case Actuator::BaseRotate:
      return 0.5;
    case Actuator::Lift:
      return 0.1;
    case Actuator::ArmExtend:
      return 0.1;
    case Actuator::WristPitch:
    case Actuator::WristYaw:
      return 0.8;
    case Actuator::Gripper:
      return 1.0;
  }
  return 0.0;
}

ActuatorParams default_params(Actuator a, const AxisThresholds& thr) {
  const double v_max = default_v_max(a);
  return {a, v_max / (thr.high_pos - thr.low_pos), v_max};
}

std::array<ActuatorParams, kActuatorCount> MappingConfig::default_actuator_table() {
  std::array<ActuatorParams, kActuatorCount> table{};
  for (Actuator a : kAllActuators) table[index_of(a)] = default_params(a);
  return table;
}

CalibrationState calibrate(const OrientationSample& sample) {
  return {wrap_degrees(static_cast<double>(sample.roll)),
          wrap_degrees(static_cast<double>(sample.pitch))};
}

double axis_velocity(double theta, double theta_c, const AxisThresholds& thr,
                     const ActuatorParams& params) {
  const double d = normalize_delta(theta, theta_c);
  double v = 0.0;
  if (d < thr.high_neg) {
    v = -params.v_max;
  } else if (d <= thr.low_neg) {
    v = params.k * (d - thr.low_neg);
  } else if (d < thr.low_pos) {
    v = 0.0;
  } else if (d <= thr.high_pos) {
    v = params.k * (d - thr.low_pos);
  } else {
    v = params.v_max;
  }
  return std::clamp(v, -params.v_max, params.v_max);
}

bool in_deadzone(double roll, double pitch, const CalibrationState& cal,
                 const AxisThresholds& thr_roll, const AxisThresholds& thr_pitch) {
  const double dr = normalize_delta(roll, cal.roll);
  const double dp = normalize_delta(pitch, cal.pitch);
  return thr_roll.low_neg < dr && dr < thr_roll.low_pos &&  //
         thr_pitch.low_neg < dp && dp < thr_pitch.low_pos;
}

}  // namespace headteleop
