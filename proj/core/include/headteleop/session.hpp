#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>

#include "headteleop/actuator.hpp"
#include "headteleop/mapping.hpp"
#include "headteleop/telemetry.hpp"

namespace headteleop {

enum class Mode : std::uint8_t { Drive, Arm, Wrist, Gripper };

std::string_view to_string(Mode m);

enum class Phase : std::uint8_t { Uncalibrated, Active };

std::string_view to_string(Phase p);

/// Head-shake trigger on the yaw axis.
struct ShakeConfig {
  double amplitude_deg = 10.0;  // |yaw delta| must reach this inside the window
  int reversals = 3;            // direction reversals needed inside the window
  std::uint32_t window_ms = 1500;
  std::uint32_t refractory_ms = 1000;
  // A swing must retrace this far before it counts as a reversal; rejects
  // sensor jitter while the head is held turned.
  double reversal_hysteresis_deg = 5.0;

  friend bool operator==(const ShakeConfig&, const ShakeConfig&) = default;
};

class ShakeDetector {
 public:
  explicit ShakeDetector(ShakeConfig cfg = {}) : cfg_(cfg) {}

  /// Feeds one sample; returns true when a shake completes. After firing the
  /// window is cleared and nothing fires again for refractory_ms.
  bool update(const OrientationSample& sample, double yaw_ref);

  int reversal_count() const { return reversal_count_; }
  std::size_t window_size() const { return window_.size(); }
  void reset();

 private:
  struct Point {
    std::uint32_t t_ms;
    double yaw_delta;  // wrapped, against the reference; for the amplitude test
    double path;       // unwrapped yaw, so sweeps across +-180 stay monotone
  };

  int count_reversals() const;

  ShakeConfig cfg_;
  std::deque<Point> window_;
  int reversal_count_ = 0;
  std::optional<std::uint32_t> last_fire_ms_;
  std::optional<double> last_yaw_;
  double path_ = 0.0;
};

struct SessionConfig {
  MappingConfig mapping;
  ShakeConfig shake;
  std::uint32_t watchdog_ms = 300;
  // Stop listening for a command token this long after a shake.
  std::uint32_t listen_timeout_ms = 5000;
  bool recalibrate_on_start = true;

  friend bool operator==(const SessionConfig&, const SessionConfig&) = default;
};

/// Routes the two head-axis velocities to the active mode's actuators.
/// Drive: pitch->BaseTranslate, roll->BaseRotate. Arm: pitch->Lift (head up
/// raises), roll->ArmExtend. Wrist: pitch->WristPitch, roll->WristYaw.
/// Gripper: pitch->Gripper, roll unused.
CommandFrame dispatch(Mode mode, double roll_v, double pitch_v);

/// The all-zero frame.
CommandFrame stop_all(std::uint32_t t_ms = 0);

enum class EventOutcome : std::uint8_t {
  Accepted,
  Repeat,        // Unrecognized token; nothing changes
  NotListening,  // strict gating: no shake preceded the token
  NoSampleYet,   // Start before any orientation sample
  Ignored,       // Start while active with recalibration disabled
};

std::string_view to_string(EventOutcome o);

/// Why the last tick produced the frame it did.
enum class TickGate : std::uint8_t { Uncalibrated, Listening, LinkLost, Deadzone, Moving };

std::string_view to_string(TickGate g);

/// One user's mode machine. Owned by a single thread; every input is
/// serialized through ingest_sample / handle_event / tick.
class Session {
 public:
  explicit Session(SessionConfig cfg = {});

  /// Latest sample wins. Returns true if the sample completed a head shake,
  /// which starts listening for a command token.
  bool ingest_sample(const OrientationSample& sample);

  /// With `gated`, tokens are only taken while listening (live use). Replay
  /// and scripted runs pass gated=false.
  EventOutcome handle_event(const ControlEvent& event, bool gated);

  /// One control tick. Zero frame unless calibrated, not listening, the link
  /// is alive and at least one axis is outside its deadzone.
  CommandFrame tick(std::uint32_t now_ms);

  Phase phase() const { return phase_; }
  Mode mode() const { return mode_; }
  bool awaiting_command() const { return awaiting_; }
  const std::optional<CalibrationState>& calibration() const { return calibration_; }
  const std::optional<OrientationSample>& latest_sample() const { return latest_; }
  TickGate last_gate() const { return last_gate_; }
  const SessionConfig& config() const { return cfg_; }
  int shake_reversals() const { return shake_.reversal_count(); }

 private:
  void expire_listening(std::uint32_t now_ms);

  SessionConfig cfg_;
  Phase phase_ = Phase::Uncalibrated;
  Mode mode_ = Mode::Drive;
  std::optional<CalibrationState> calibration_;
  std::optional<OrientationSample> latest_;
  std::optional<double> yaw_ref_;
  bool awaiting_ = false;
  std::uint32_t awaiting_since_ms_ = 0;
  ShakeDetector shake_;
  TickGate last_gate_ = TickGate::Uncalibrated;
};

}  // namespace headteleop
