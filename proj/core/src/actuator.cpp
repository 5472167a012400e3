#include "headteleop/actuator.hpp"

#include <utility>

namespace headteleop {
namespace {

constexpr std::array<std::pair<Actuator, std::string_view>, kActuatorCount> kNames{{
    {Actuator::BaseTranslate, "base_translate"},
    {Actuator::BaseRotate, "base_rotate"},
    {Actuator::Lift, "lift"},
    {Actuator::ArmExtend, "arm_extend"},
    {Actuator::WristPitch, "wrist_pitch"},
    {Actuator::WristYaw, "wrist_yaw"},
    {Actuator::Gripper, "gripper"},
}};

}  // namespace

std::string_view to_string(Actuator a) { return kNames[index_of(a)].second; }

std::optional<Actuator> actuator_from_string(std::string_view name) {
  for (const auto& [a, n] : kNames) {
    if (n == name) return a;
  }
  return std::nullopt;
}

}  // namespace headteleop
