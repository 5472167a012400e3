#pragma once

#include <cmath>

namespace headteleop {

inline constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle in degrees into (-180, 180].
///
/// std::remainder is exact, so a float input wraps to a value that is still
/// exactly representable as float.
inline double wrap_degrees(double deg) {
  double r = std::remainder(deg, 360.0);
  if (r <= -180.0) r += 360.0;
  return r;
}

inline float wrap_degrees(float deg) {
  return static_cast<float>(wrap_degrees(static_cast<double>(deg)));
}

/// Signed minimal difference theta - theta_c, in (-180, 180].
inline double normalize_delta(double theta, double theta_c) {
  return wrap_degrees(theta - theta_c);
}

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

}  // namespace headteleop
