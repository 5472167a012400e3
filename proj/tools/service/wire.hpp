#pragma once

// Text half of the console protocol. Binary websocket messages carry 20-byte
// telemetry frames; text messages are single lines
//
//   kind|key=value|key=value...
//
// with '%', '|', '=' and line breaks in values percent-encoded (%25, %7C,
// %3D, %0A, %0D). See docs/wire.md for every message kind.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "headteleop/episode.hpp"

namespace headteleop::wire {

struct TextMessage {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> fields;

  TextMessage& add(std::string key, std::string value);
  TextMessage& add(std::string key, double value, int precision = 4);
  std::optional<std::string_view> get(std::string_view key) const;
};

std::string encode(const TextMessage& msg);

/// nullopt for an empty kind or a field without '='.
std::optional<TextMessage> decode(std::string_view line);

std::string escape(std::string_view v);
std::string unescape(std::string_view v);

// Client -> server
inline constexpr std::string_view kToken = "token";  // text=<spoken token>
inline constexpr std::string_view kReset = "reset";

// Server -> client
inline constexpr std::string_view kHello = "hello";
inline constexpr std::string_view kSnapshot = "snapshot";
inline constexpr std::string_view kModeNotice = "mode";
inline constexpr std::string_view kConfirm = "confirm";
inline constexpr std::string_view kSuccess = "success";
inline constexpr std::string_view kLimit = "limit";
inline constexpr std::string_view kError = "error";

TextMessage snapshot(const Episode& episode, bool link_lost);
TextMessage mode_notice(const Session& session);

/// Reply to one command token. `result` is accepted, repeat or rejected.
TextMessage confirmation(std::string_view token, EventOutcome outcome);

TextMessage success_notice(const Episode& episode);
TextMessage limit_notice(const ClampSet& clamped);

}  // namespace headteleop::wire
