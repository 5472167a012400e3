#include "wire.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "headteleop/angles.hpp"

namespace headteleop::wire {
namespace {

std::string fixed(double v, int precision) {
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, precision);
  std::string s(buf.data(), p);
  if (s.starts_with('-') && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

TextMessage& TextMessage::add(std::string key, std::string value) {
  fields.emplace_back(std::move(key), std::move(value));
  return *this;
}

TextMessage& TextMessage::add(std::string key, double value, int precision) {
  return add(std::move(key), fixed(value, precision));
}

std::optional<std::string_view> TextMessage::get(std::string_view key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return std::string_view(v);
  }
  return std::nullopt;
}

std::string escape(std::string_view v) {
  std::string out;
  out.reserve(v.size());
  for (char c : v) {
    switch (c) {
      case '%':
        out += "%25";
        break;
      case '|':
        out += "%7C";
        break;
      case '=':
        out += "%3D";
        break;
      case '\n':
        out += "%0A";
        break;
      case '\r':
        out += "%0D";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string unescape(std::string_view v) {
  std::string out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == '%' && i + 2 < v.size()) {
      const int hi = hex_value(v[i + 1]);
      const int lo = hex_value(v[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out += static_cast<char>(hi * 16 + lo);
        i += 2;
        continue;
      }
    }
    out += v[i];
  }
  return out;
}

std::string encode(const TextMessage& msg) {
  std::string out = escape(msg.kind);
  for (const auto& [k, v] : msg.fields) {
    out += '|';
    out += escape(k);
    out += '=';
    out += escape(v);
  }
  return out;
}

std::optional<TextMessage> decode(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
  TextMessage msg;
  std::size_t pos = line.find('|');
  msg.kind = unescape(line.substr(0, pos));
  if (msg.kind.empty()) return std::nullopt;
  while (pos != std::string_view::npos) {
    const std::size_t start = pos + 1;
    pos = line.find('|', start);
    const auto part = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) return std::nullopt;
    msg.fields.emplace_back(unescape(part.substr(0, eq)), unescape(part.substr(eq + 1)));
  }
  return msg;
}

TextMessage snapshot(const Episode& episode, bool link_lost) {
  const Session& s = episode.session();
  const RobotState& r = episode.world().robot;
  const EndEffector ee = end_effector_pose(r, episode.limits());
  TextMessage m{std::string(kSnapshot), {}};
  m.add("t_ms", std::to_string(episode.now_ms()));
  m.add("phase", std::string(to_string(s.phase())));
  m.add("mode", std::string(to_string(s.mode())));
  m.add("awaiting", s.awaiting_command() ? "1" : "0");
  m.add("link", link_lost ? "lost" : "ok");
  m.add("gate", std::string(link_lost ? to_string(TickGate::LinkLost) : to_string(s.last_gate())));
  m.add("base_x", r.base_x).add("base_y", r.base_y).add("heading", r.heading);
  m.add("lift", r.lift).add("arm_ext", r.arm_ext);
  m.add("wrist_pitch", r.wrist_pitch).add("wrist_yaw", r.wrist_yaw).add("grip", r.grip);
  m.add("held", r.held_object.value_or("-"));
  m.add("ee_x", ee.position.x).add("ee_y", ee.position.y).add("ee_z", ee.position.z);
  for (Actuator a : kAllActuators) {
    const double v = link_lost ? 0.0 : episode.last_frame()[a];
    m.add("v." + std::string(to_string(a)), v);
  }
  if (s.calibration() && s.latest_sample()) {
    m.add("roll_delta", normalize_delta(s.latest_sample()->roll, s.calibration()->roll), 2);
    m.add("pitch_delta", normalize_delta(s.latest_sample()->pitch, s.calibration()->pitch), 2);
  }
  std::string objects;
  for (const auto& o : episode.world().objects) {
    if (!objects.empty()) objects += ';';
    objects += o.id + ':' + fixed(o.pose.x, 3) + ',' + fixed(o.pose.y, 3) + ',' + fixed(o.pose.z, 3);
  }
  m.add("objects", objects);
  m.add("completed", episode.metrics().completed ? "1" : "0");
  m.add("task_time_s", episode.metrics().task_time_s, 1);
  return m;
}

TextMessage mode_notice(const Session& session) {
  TextMessage m{std::string(kModeNotice), {}};
  m.add("phase", std::string(to_string(session.phase())));
  m.add("mode", std::string(to_string(session.mode())));
  m.add("awaiting", session.awaiting_command() ? "1" : "0");
  return m;
}

TextMessage confirmation(std::string_view token, EventOutcome outcome) {
  TextMessage m{std::string(kConfirm), {}};
  m.add("token", std::string(token));
  const EventKind heard = event_kind_from_token(token);
  switch (outcome) {
    case EventOutcome::Accepted:
      m.add("result", "accepted");
      m.add("heard", std::string(token_for(heard)));
      break;
    case EventOutcome::Repeat:
      m.add("result", "repeat");
      m.add("heard", "repeat");
      break;
    default:
      m.add("result", "rejected");
      m.add("heard", "repeat");
      break;
  }
  m.add("reason", std::string(to_string(outcome)));
  return m;
}

TextMessage success_notice(const Episode& episode) {
  TextMessage m{std::string(kSuccess), {}};
  m.add("scenario", episode.scenario().id);
  m.add("task_time_s", episode.metrics().task_time_s, 1);
  return m;
}

TextMessage limit_notice(const ClampSet& clamped) {
  std::string names;
  for (Actuator a : clamped.members()) {
    if (!names.empty()) names += ',';
    names += to_string(a);
  }
  TextMessage m{std::string(kLimit), {}};
  m.add("actuators", names);
  return m;
}

}  // namespace headteleop::wire
