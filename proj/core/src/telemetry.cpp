#include "headteleop/telemetry.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <limits>

#include "headteleop/angles.hpp"

namespace headteleop {
namespace {

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

void put_u32(std::byte* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out[i] = static_cast<std::byte>((v >> (8 * i)) & 0xFFU);
}

std::uint32_t get_u32(const std::byte* in) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::to_integer<std::uint32_t>(in[i]) << (8 * i);
  return v;
}

void put_f32(std::byte* out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }
float get_f32(const std::byte* in) { return std::bit_cast<float>(get_u32(in)); }

constexpr std::array<std::pair<EventKind, std::string_view>, 6> kNames{{
    {EventKind::Start, "Start"},
    {EventKind::SwitchDrive, "SwitchDrive"},
    {EventKind::SwitchArm, "SwitchArm"},
    {EventKind::SwitchWrist, "SwitchWrist"},
    {EventKind::SwitchGripper, "SwitchGripper"},
    {EventKind::Unrecognized, "Unrecognized"},
}};

constexpr std::array<std::pair<EventKind, std::string_view>, 6> kTokens{{
    {EventKind::Start, "start"},
    {EventKind::SwitchDrive, "switch to drive"},
    {EventKind::SwitchArm, "switch to arm"},
    {EventKind::SwitchWrist, "switch to wrist"},
    {EventKind::SwitchGripper, "switch to gripper"},
    {EventKind::Unrecognized, "repeat"},
}};

}  // namespace

OrientationSample normalized(OrientationSample s) {
  s.roll = wrap_degrees(s.roll);
  s.pitch = wrap_degrees(s.pitch);
  s.yaw = wrap_degrees(s.yaw);
  return s;
}

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "Unrecognized";
}

std::optional<EventKind> event_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

EventKind event_kind_from_token(std::string_view token) {
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) token.remove_prefix(1);
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) token.remove_suffix(1);
  std::string lower(token);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto& [k, t] : kTokens) {
    if (k != EventKind::Unrecognized && t == lower) return k;
  }
  return EventKind::Unrecognized;
}

std::string_view token_for(EventKind kind) {
  for (const auto& [k, t] : kTokens) {
    if (k == kind) return t;
  }
  return "repeat";
}

Frame encode_sample(const OrientationSample& sample) {
  Frame out{};
  put_u32(out.data() + 0, sample.seq);
  put_u32(out.data() + 4, sample.t_ms);
  put_f32(out.data() + 8, sample.roll);
  put_f32(out.data() + 12, sample.pitch);
  put_f32(out.data() + 16, sample.yaw);
  return out;
}

std::string_view to_string(DecodeError err) {
  switch (err) {
    case DecodeError::WrongLength:
      return "WrongLength";
    case DecodeError::NonFiniteAngle:
      return "NonFiniteAngle";
  }
  return "Unknown";
}

DecodeResult decode_sample(std::span<const std::byte> bytes) {
  if (bytes.size() != kFrameSize) return DecodeError::WrongLength;
  OrientationSample s;
  s.seq = get_u32(bytes.data() + 0);
  s.t_ms = get_u32(bytes.data() + 4);
  s.roll = get_f32(bytes.data() + 8);
  s.pitch = get_f32(bytes.data() + 12);
  s.yaw = get_f32(bytes.data() + 16);
  if (!std::isfinite(s.roll) || !std::isfinite(s.pitch) || !std::isfinite(s.yaw)) {
    return DecodeError::NonFiniteAngle;
  }
  return normalized(s);
}

SequenceCheck check_sequence(std::uint32_t prev_seq, std::uint32_t next_seq) {
  if (next_seq <= prev_seq) return {SequenceCheck::Kind::Stale, 0};
  if (next_seq == prev_seq + 1) return {SequenceCheck::Kind::InOrder, 0};
  return {SequenceCheck::Kind::Gap, next_seq - prev_seq - 1};
}

std::optional<OrientationSample> StreamReader::accept(std::span<const std::byte> bytes) {
  auto decoded = decode_sample(bytes);
  if (const auto* s = std::get_if<OrientationSample>(&decoded)) return accept(*s);
  ++stats_.corrupt;
  return std::nullopt;
}

std::optional<OrientationSample> StreamReader::accept(const OrientationSample& sample) {
  if (last_seq_) {
    const auto check = check_sequence(*last_seq_, sample.seq);
    if (check.kind == SequenceCheck::Kind::Stale) {
      ++stats_.stale;
      return std::nullopt;
    }
    if (check.kind == SequenceCheck::Kind::Gap) {
      ++stats_.gaps;
      stats_.missing += check.missing;
    }
  }
  last_seq_ = sample.seq;
  ++stats_.accepted;
  return normalized(sample);
}

}  // namespace headteleop
