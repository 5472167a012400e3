#pragma once

// Head angle -> actuator velocity mapping.
//
// All evaluation happens on the wrap-normalized delta d = theta - theta_c, so
// thresholds are stored relative to the calibrated pose:
//
//   V(d) = -v_max              d <  high_neg
//          k (d - low_neg)     high_neg <= d <= low_neg
//          0                   low_neg  <  d <  low_pos
//          k (d - low_pos)     low_pos  <= d <= high_pos
//          +v_max              high_pos <  d

#include <array>
#include <optional>

#include "headteleop/actuator.hpp"
#include "headteleop/telemetry.hpp"

namespace headteleop {

/// Thresholds for one head axis, in degrees relative to the calibrated angle.
struct AxisThresholds {
  double low_pos = 15.0;
  double high_pos = 45.0;
  double low_neg = -15.0;
  double high_neg = -45.0;

  bool well_ordered() const {
    return high_neg < low_neg && low_neg < low_pos && low_pos < high_pos;
  }

  friend bool operator==(const AxisThresholds&, const AxisThresholds&) = default;
};

struct ActuatorParams {
  Actuator id = Actuator::BaseTranslate;
  double k = 0.0;      // velocity units per degree
  double v_max = 0.0;  // velocity units

  friend bool operator==(const ActuatorParams&, const ActuatorParams&) = default;
};

/// Default saturation speed per actuator (m/s, rad/s, or aperture/s).
double default_v_max(Actuator a);

/// k chosen so the positive ramp reaches v_max exactly at high_pos.
ActuatorParams default_params(Actuator a, const AxisThresholds& thr = {});

/// The calibrated head pose, captured once per Start.
struct CalibrationState {
  double roll = 0.0;
  double pitch = 0.0;

  friend bool operator==(const CalibrationState&, const CalibrationState&) = default;
};

CalibrationState calibrate(const OrientationSample& sample);

/// Velocity command for one actuator from one head axis. The result is also
/// clamped to [-v_max, v_max], which only matters for asymmetric thresholds
/// whose ramp would overshoot.
double axis_velocity(double theta, double theta_c, const AxisThresholds& thr,
                     const ActuatorParams& params);

/// True iff both axes sit strictly inside their deadzones.
bool in_deadzone(double roll, double pitch, const CalibrationState& cal,
                 const AxisThresholds& thr_roll, const AxisThresholds& thr_pitch);

/// Everything the mapping needs: per-axis thresholds and per-actuator gains.
struct MappingConfig {
  AxisThresholds roll;
  AxisThresholds pitch;
  std::array<ActuatorParams, kActuatorCount> actuators = default_actuator_table();

  const ActuatorParams& params(Actuator a) const { return actuators[index_of(a)]; }

  static std::array<ActuatorParams, kActuatorCount> default_actuator_table();

  friend bool operator==(const MappingConfig&, const MappingConfig&) = default;
};

}  // namespace headteleop
