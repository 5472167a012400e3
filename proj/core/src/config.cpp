#include "headteleop/config.hpp"

#include <yaml-cpp/yaml.h>

#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace headteleop {
namespace {

[[noreturn]] void fail(std::string_view origin, const YAML::Node& node, const std::string& msg) {
  std::ostringstream os;
  os << origin;
  const auto mark = node.Mark();
  if (!mark.is_null()) os << ':' << (mark.line + 1) << ':' << (mark.column + 1);
  os << ": " << msg;
  throw ConfigError(os.str());
}

void check_keys(std::string_view origin, const YAML::Node& map,
                std::initializer_list<std::string_view> allowed) {
  if (!map.IsMap()) fail(origin, map, "expected a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) fail(origin, kv.first, "unknown key '" + key + "'");
  }
}

template <typename T>
void read(std::string_view origin, const YAML::Node& map, const char* key, T& out) {
  const YAML::Node n = map[key];
  if (!n) return;
  try {
    out = n.as<T>();
  } catch (const YAML::Exception&) {
    fail(origin, n, std::string("bad value for '") + key + "'");
  }
}

void read_thresholds(std::string_view origin, const YAML::Node& n, AxisThresholds& thr) {
  check_keys(origin, n, {"low_pos", "high_pos", "low_neg", "high_neg"});
  read(origin, n, "low_pos", thr.low_pos);
  read(origin, n, "high_pos", thr.high_pos);
  read(origin, n, "low_neg", thr.low_neg);
  read(origin, n, "high_neg", thr.high_neg);
}

void read_interval(std::string_view origin, const YAML::Node& n, const char* key, Interval& out) {
  const YAML::Node v = n[key];
  if (!v) return;
  if (!v.IsSequence() || v.size() != 2) fail(origin, v, std::string("'") + key + "' must be [lo, hi]");
  out = {v[0].as<double>(), v[1].as<double>()};
}

// Which head axis feeds an actuator; decides the default gain.
bool driven_by_roll(Actuator a) {
  return a == Actuator::BaseRotate || a == Actuator::ArmExtend || a == Actuator::WristYaw;
}

void put(std::ostringstream& os, const char* key, double v) {
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  os << key << '=' << std::string_view(buf.data(), static_cast<std::size_t>(p - buf.data())) << '\n';
}

}  // namespace

ServiceConfig parse_config(std::string_view yaml_text, std::string_view origin) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << origin << ':' << (e.mark.line + 1) << ':' << (e.mark.column + 1) << ": " << e.msg;
    throw ConfigError(os.str());
  }

  ServiceConfig cfg;
  if (root.IsNull()) return cfg;
  check_keys(origin, root,
             {"listen", "scenario", "trace_dir", "strict_gating", "watchdog_ms", "listen_timeout_ms",
              "recalibrate_on_start", "thresholds", "actuators", "shake", "limits"});

  if (const auto listen = root["listen"]) {
    check_keys(origin, listen, {"address", "port"});
    read(origin, listen, "address", cfg.listen_address);
    read(origin, listen, "port", cfg.listen_port);
    // Port 0 (ephemeral) is only for embedding the server in-process.
    if (cfg.listen_port == 0) fail(origin, listen["port"], "listen port must be positive");
  }
  read(origin, root, "scenario", cfg.scenario);
  read(origin, root, "trace_dir", cfg.trace_dir);
  read(origin, root, "strict_gating", cfg.strict_gating);

  auto& s = cfg.session;
  read(origin, root, "watchdog_ms", s.watchdog_ms);
  read(origin, root, "listen_timeout_ms", s.listen_timeout_ms);
  read(origin, root, "recalibrate_on_start", s.recalibrate_on_start);

  if (const auto thr = root["thresholds"]) {
    check_keys(origin, thr, {"roll", "pitch"});
    if (thr["roll"]) read_thresholds(origin, thr["roll"], s.mapping.roll);
    if (thr["pitch"]) read_thresholds(origin, thr["pitch"], s.mapping.pitch);
  }

  // Gains: explicit k wins, otherwise derived from v_max and the driving
  // axis' ramp width so the ramp meets saturation at the high threshold.
  std::array<bool, kActuatorCount> explicit_k{};
  if (const auto acts = root["actuators"]) {
    if (!acts.IsMap()) fail(origin, acts, "'actuators' must be a mapping");
    for (const auto& kv : acts) {
      const auto name = kv.first.as<std::string>();
      const auto a = actuator_from_string(name);
      if (!a) fail(origin, kv.first, "unknown actuator '" + name + "'");
      check_keys(origin, kv.second, {"k", "v_max"});
      auto& p = s.mapping.actuators[index_of(*a)];
      read(origin, kv.second, "v_max", p.v_max);
      if (kv.second["k"]) {
        read(origin, kv.second, "k", p.k);
        explicit_k[index_of(*a)] = true;
      }
    }
  }
  for (Actuator a : kAllActuators) {
    if (explicit_k[index_of(a)]) continue;
    const AxisThresholds& axis = driven_by_roll(a) ? s.mapping.roll : s.mapping.pitch;
    auto& p = s.mapping.actuators[index_of(a)];
    p.k = p.v_max / (axis.high_pos - axis.low_pos);
  }

  if (const auto sh = root["shake"]) {
    check_keys(origin, sh, {"amplitude_deg", "reversals", "window_ms", "refractory_ms",
                            "reversal_hysteresis_deg"});
    read(origin, sh, "amplitude_deg", s.shake.amplitude_deg);
    read(origin, sh, "reversals", s.shake.reversals);
    read(origin, sh, "window_ms", s.shake.window_ms);
    read(origin, sh, "refractory_ms", s.shake.refractory_ms);
    read(origin, sh, "reversal_hysteresis_deg", s.shake.reversal_hysteresis_deg);
  }

  if (const auto lim = root["limits"]) {
    check_keys(origin, lim, {"lift_max", "ext_max", "wrist_pitch", "wrist_yaw", "arm_base_offset",
                             "grasp_close_threshold", "release_threshold", "grasp_radius"});
    auto& l = cfg.limits;
    read(origin, lim, "lift_max", l.lift_max);
    read(origin, lim, "ext_max", l.ext_max);
    read_interval(origin, lim, "wrist_pitch", l.wrist_pitch);
    read_interval(origin, lim, "wrist_yaw", l.wrist_yaw);
    read(origin, lim, "arm_base_offset", l.arm_base_offset);
    read(origin, lim, "grasp_close_threshold", l.grasp_close_threshold);
    read(origin, lim, "release_threshold", l.release_threshold);
    read(origin, lim, "grasp_radius", l.grasp_radius);
  }

  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
  return cfg;
}

ServiceConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

void validate(const ServiceConfig& cfg) {
  const auto& s = cfg.session;
  if (!s.mapping.roll.well_ordered()) throw ConfigError("roll thresholds are not well ordered");
  if (!s.mapping.pitch.well_ordered()) throw ConfigError("pitch thresholds are not well ordered");
  for (const auto& p : s.mapping.actuators) {
    if (!(p.k > 0.0) || !(p.v_max > 0.0)) {
      throw ConfigError("actuator '" + std::string(to_string(p.id)) + "' needs k > 0 and v_max > 0");
    }
  }
  if (s.watchdog_ms == 0) throw ConfigError("watchdog_ms must be positive");
  if (s.listen_timeout_ms == 0) throw ConfigError("listen_timeout_ms must be positive");
  if (!(s.shake.amplitude_deg > 0.0) || s.shake.reversals <= 0 || s.shake.window_ms == 0 ||
      !(s.shake.reversal_hysteresis_deg > 0.0)) {
    throw ConfigError("shake parameters must be positive");
  }
  if (!cfg.limits.valid()) throw ConfigError("robot limits are invalid");
}

std::string canonical_text(const SessionConfig& s, const ActuatorLimits& l) {
  std::ostringstream os;
  auto thr = [&](const char* axis, const AxisThresholds& t) {
    os << "thresholds." << axis << '\n';
    put(os, "low_pos", t.low_pos);
    put(os, "high_pos", t.high_pos);
    put(os, "low_neg", t.low_neg);
    put(os, "high_neg", t.high_neg);
  };
  thr("roll", s.mapping.roll);
  thr("pitch", s.mapping.pitch);
  for (const auto& p : s.mapping.actuators) {
    os << "actuator." << to_string(p.id) << '\n';
    put(os, "k", p.k);
    put(os, "v_max", p.v_max);
  }
  put(os, "shake.amplitude_deg", s.shake.amplitude_deg);
  put(os, "shake.reversals", s.shake.reversals);
  put(os, "shake.window_ms", s.shake.window_ms);
  put(os, "shake.refractory_ms", s.shake.refractory_ms);
  put(os, "shake.reversal_hysteresis_deg", s.shake.reversal_hysteresis_deg);
  put(os, "watchdog_ms", s.watchdog_ms);
  put(os, "listen_timeout_ms", s.listen_timeout_ms);
  put(os, "recalibrate_on_start", s.recalibrate_on_start ? 1.0 : 0.0);
  put(os, "limits.lift_max", l.lift_max);
  put(os, "limits.ext_max", l.ext_max);
  put(os, "limits.wrist_pitch.lo", l.wrist_pitch.lo);
  put(os, "limits.wrist_pitch.hi", l.wrist_pitch.hi);
  put(os, "limits.wrist_yaw.lo", l.wrist_yaw.lo);
  put(os, "limits.wrist_yaw.hi", l.wrist_yaw.hi);
  put(os, "limits.arm_base_offset", l.arm_base_offset);
  put(os, "limits.grasp_close_threshold", l.grasp_close_threshold);
  put(os, "limits.release_threshold", l.release_threshold);
  put(os, "limits.grasp_radius", l.grasp_radius);
  return os.str();
}

std::string config_hash(const SessionConfig& session, const ActuatorLimits& limits) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text(session, limits)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + 16, h, 16);
  std::string hex(buf.data(), p);
  return std::string(16 - hex.size(), '0') + hex;
}

void apply_env_overrides(ServiceConfig& cfg) {
  if (const char* listen = std::getenv("HEADTELEOP_LISTEN"); listen != nullptr && *listen != '\0') {
    std::string_view v(listen);
    const auto colon = v.rfind(':');
    std::string_view port_text = v;
    if (colon != std::string_view::npos) {
      cfg.listen_address = std::string(v.substr(0, colon));
      port_text = v.substr(colon + 1);
    }
    std::uint16_t port = 0;
    auto [p, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc() || p != port_text.data() + port_text.size() || port == 0) {
      throw ConfigError("HEADTELEOP_LISTEN: bad port in '" + std::string(v) + "'");
    }
    cfg.listen_port = port;
  }
}

}  // namespace headteleop
