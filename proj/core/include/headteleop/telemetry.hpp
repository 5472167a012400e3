#pragma once

// Orientation stream and control events carried over the hat link.
//
// Wire frame (20 bytes, little-endian):
//   offset 0  u32 seq
//   offset 4  u32 t_ms
//   offset 8  f32 roll   (deg)
//   offset 12 f32 pitch  (deg)
//   offset 16 f32 yaw    (deg)

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

namespace headteleop {

struct OrientationSample {
  std::uint32_t seq = 0;
  std::uint32_t t_ms = 0;
  float roll = 0.0F;
  float pitch = 0.0F;
  float yaw = 0.0F;

  friend bool operator==(const OrientationSample&, const OrientationSample&) = default;
};

/// Returns a copy with all three angles wrapped into (-180, 180].
OrientationSample normalized(OrientationSample s);

enum class EventKind : std::uint8_t {
  Start,
  SwitchDrive,
  SwitchArm,
  SwitchWrist,
  SwitchGripper,
  Unrecognized,  // the "repeat" reply; never changes mode
};

struct ControlEvent {
  std::uint32_t t_ms = 0;
  EventKind kind = EventKind::Unrecognized;

  friend bool operator==(const ControlEvent&, const ControlEvent&) = default;
};

/// Trace spelling, e.g. "SwitchArm".
std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view name);

/// Maps a spoken-style command token ("start", "switch to arm", ...) to an
/// event kind. Anything else is Unrecognized. Case and surrounding
/// whitespace are ignored.
EventKind event_kind_from_token(std::string_view token);

/// Inverse of event_kind_from_token; "repeat" for Unrecognized.
std::string_view token_for(EventKind kind);

inline constexpr std::size_t kFrameSize = 20;
using Frame = std::array<std::byte, kFrameSize>;

Frame encode_sample(const OrientationSample& sample);

enum class DecodeError : std::uint8_t { WrongLength, NonFiniteAngle };
std::string_view to_string(DecodeError err);

using DecodeResult = std::variant<OrientationSample, DecodeError>;

DecodeResult decode_sample(std::span<const std::byte> bytes);

struct SequenceCheck {
  enum class Kind : std::uint8_t { InOrder, Gap, Stale };
  Kind kind = Kind::InOrder;
  std::uint32_t missing = 0;  // only meaningful for Gap

  friend bool operator==(const SequenceCheck&, const SequenceCheck&) = default;
};

SequenceCheck check_sequence(std::uint32_t prev_seq, std::uint32_t next_seq);

/// Single-consumer reader for one connection. Drops corrupt and stale frames,
/// counts gaps, and forwards everything else.
class StreamReader {
 public:
  struct Stats {
    std::uint64_t accepted = 0;
    std::uint64_t corrupt = 0;
    std::uint64_t stale = 0;
    std::uint64_t gaps = 0;
    std::uint64_t missing = 0;
  };

  std::optional<OrientationSample> accept(std::span<const std::byte> bytes);
  std::optional<OrientationSample> accept(const OrientationSample& sample);

  const Stats& stats() const { return stats_; }
  std::optional<std::uint32_t> last_seq() const { return last_seq_; }

 private:
  std::optional<std::uint32_t> last_seq_;
  Stats stats_;
};

}  // namespace headteleop
