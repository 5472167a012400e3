#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace headteleop {

enum class Actuator : std::uint8_t {
  BaseTranslate,
  BaseRotate,
  Lift,
  ArmExtend,
  WristPitch,
  WristYaw,
  Gripper,
};

inline constexpr std::size_t kActuatorCount = 7;

inline constexpr std::array<Actuator, kActuatorCount> kAllActuators{
    Actuator::BaseTranslate, Actuator::BaseRotate, Actuator::Lift,    Actuator::ArmExtend,
    Actuator::WristPitch,    Actuator::WristYaw,   Actuator::Gripper,
};

constexpr std::size_t index_of(Actuator a) { return static_cast<std::size_t>(a); }

/// snake_case spelling used in config, wire messages and CLI output.
std::string_view to_string(Actuator a);
std::optional<Actuator> actuator_from_string(std::string_view name);

/// Per-actuator velocity bundle pushed to the robot once per control tick.
///
/// Sign conventions at the actuator: BaseTranslate + forward, BaseRotate +
/// clockwise (seen from above), Lift + up, ArmExtend + outward, Gripper + open.
/// A zero entry means the actuator is absent from the frame.
struct CommandFrame {
  std::uint32_t t_ms = 0;
  std::array<double, kActuatorCount> velocity{};

  double operator[](Actuator a) const { return velocity[index_of(a)]; }
  double& operator[](Actuator a) { return velocity[index_of(a)]; }

  std::size_t nonzero_count() const {
    std::size_t n = 0;
    for (double v : velocity) n += (v != 0.0) ? 1 : 0;
    return n;
  }
  bool is_zero() const { return nonzero_count() == 0; }

  friend bool operator==(const CommandFrame&, const CommandFrame&) = default;
};

}  // namespace headteleop
