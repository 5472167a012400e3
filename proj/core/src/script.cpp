#include "headteleop/script.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace headteleop {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string_view next_word(std::string_view& s) {
  s = trim(s);
  std::size_t i = 0;
  while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
  auto w = s.substr(0, i);
  s.remove_prefix(i);
  return w;
}

template <typename T>
bool parse_num(std::string_view s, T& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

Script parse_script(std::istream& in) {
  Script script;
  std::string raw;
  int line_no = 0;
  std::uint32_t last_t = 0;

  auto bad = [&](const std::string& msg) { return MalformedScript("line " + std::to_string(line_no) + ": " + msg, line_no); };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto time_word = next_word(line);
    std::uint32_t t = 0;
    if (!time_word.empty() && time_word.front() == '+') {
      std::uint32_t delta = 0;
      if (!parse_num(time_word.substr(1), delta)) throw bad("bad relative time '" + std::string(time_word) + "'");
      t = last_t + delta;
    } else if (!parse_num(time_word, t)) {
      throw bad("bad time '" + std::string(time_word) + "'");
    }
    if (t < last_t) throw bad("time goes backwards");
    last_t = t;

    const auto verb = next_word(line);
    if (verb == "pose") {
      Keyframe k;
      k.t_ms = t;
      float* fields[] = {&k.roll, &k.pitch, &k.yaw};
      for (float* f : fields) {
        if (!parse_num(next_word(line), *f) || !std::isfinite(*f)) throw bad("pose needs three finite angles");
      }
      if (!trim(line).empty()) throw bad("trailing text after pose");
      script.keyframes.push_back(k);
    } else if (verb == "event") {
      const auto token = trim(line);
      if (token.empty()) throw bad("event needs a token");
      EventKind kind = event_kind_from_token(token);
      if (auto named = event_kind_from_string(token)) kind = *named;
      script.actions.emplace_back(ControlEvent{t, kind});
    } else if (verb == "reset") {
      if (!trim(line).empty()) throw bad("trailing text after reset");
      script.actions.emplace_back(ResetRecord{t});
    } else {
      throw bad("unknown directive '" + std::string(verb) + "'");
    }
    script.end_ms = t;
  }
  return script;
}

Script read_script_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedScript("cannot open script '" + path + "'", 0);
  return parse_script(in);
}

Keyframe pose_at(const Script& script, std::uint32_t t_ms) {
  const auto& ks = script.keyframes;
  Keyframe out;
  out.t_ms = t_ms;
  if (ks.empty()) return out;

  std::size_t j = ks.size();
  for (std::size_t i = 0; i < ks.size() && ks[i].t_ms <= t_ms; ++i) j = i;
  if (j == ks.size()) j = 0;

  const Keyframe& a = ks[j];
  if (j + 1 == ks.size() || a.t_ms > t_ms) {
    out.roll = a.roll;
    out.pitch = a.pitch;
    out.yaw = a.yaw;
    return out;
  }
  const Keyframe& b = ks[j + 1];
  const double u = static_cast<double>(t_ms - a.t_ms) / static_cast<double>(b.t_ms - a.t_ms);
  auto lerp = [u](float x, float y) { return static_cast<float>(x + (static_cast<double>(y) - x) * u); };
  out.roll = lerp(a.roll, b.roll);
  out.pitch = lerp(a.pitch, b.pitch);
  out.yaw = lerp(a.yaw, b.yaw);
  return out;
}

std::vector<TraceRecord> synthesize_records(const Script& script) {
  std::vector<TraceRecord> out;
  std::size_t next_action = 0;
  std::uint32_t seq = 0;
  for (std::uint32_t t = 0; t <= script.end_ms; t += kSamplePeriodMs) {
    while (next_action < script.actions.size() && record_time(script.actions[next_action]) < t) {
      out.push_back(script.actions[next_action++]);
    }
    const Keyframe k = pose_at(script, t);
    out.emplace_back(canonical_sample(OrientationSample{seq++, t, k.roll, k.pitch, k.yaw}));
  }
  while (next_action < script.actions.size()) out.push_back(script.actions[next_action++]);
  return out;
}

}  // namespace headteleop
