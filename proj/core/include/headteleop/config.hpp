#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "headteleop/robot_sim.hpp"
#include "headteleop/session.hpp"

namespace headteleop {

struct ServiceConfig {
  std::string listen_address = "127.0.0.1";
  std::uint16_t listen_port = 8765;
  std::string scenario = "cup";
  std::string trace_dir;  // empty: live sessions are not recorded
  bool strict_gating = true;
  SessionConfig session;
  ActuatorLimits limits;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses YAML. Missing keys keep their defaults; actuator `k` defaults to
/// v_max / (high_pos - low_pos) of the axis that drives it. Throws ConfigError
/// on unknown keys or values that break an invariant.
ServiceConfig parse_config(std::string_view yaml_text, std::string_view origin = "<string>");
ServiceConfig load_config(const std::string& path);

/// Rejects non-positive gains/limits and badly ordered thresholds.
void validate(const ServiceConfig& cfg);

/// Stable text form of everything that influences replay.
std::string canonical_text(const SessionConfig& session, const ActuatorLimits& limits);

/// 64-bit FNV-1a of canonical_text, as 16 lowercase hex digits.
std::string config_hash(const SessionConfig& session, const ActuatorLimits& limits);

/// Environment overrides: HEADTELEOP_LISTEN ("host:port" or "port") and
/// HEADTELEOP_CONFIG (config path, consulted by the CLI).
void apply_env_overrides(ServiceConfig& cfg);

}  // namespace headteleop
