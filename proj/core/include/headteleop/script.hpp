#pragma once

// Scripted head motion for headless runs.
//
// One directive per line; `#` starts a comment. A time is either absolute
// milliseconds or `+N`, relative to the previous directive:
//
//   <time> pose <roll> <pitch> <yaw>    keyframe (degrees)
//   <time> event <token>                "start", "switch to arm", ... or a
//                                       trace kind name such as SwitchArm
//   <time> reset
//
// Head pose is interpolated linearly between keyframes and held flat before
// the first and after the last one. Two keyframes at the same time make a
// step; the later one wins at that instant. Samples are synthesized at 20 Hz
// from t=0 to the last directive; an event or reset at time t lands after the
// sample at t.

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "headteleop/trace.hpp"

namespace headteleop {

inline constexpr std::uint32_t kSamplePeriodMs = 50;

struct Keyframe {
  std::uint32_t t_ms = 0;
  float roll = 0.0F;
  float pitch = 0.0F;
  float yaw = 0.0F;
};

struct Script {
  std::vector<Keyframe> keyframes;
  std::vector<TraceRecord> actions;  // events and resets, in time order
  std::uint32_t end_ms = 0;
};

class MalformedScript : public std::runtime_error {
 public:
  MalformedScript(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

Script parse_script(std::istream& in);
Script read_script_file(const std::string& path);

/// Head pose at time t.
Keyframe pose_at(const Script& script, std::uint32_t t_ms);

/// 20 Hz canonical samples merged with the script's actions, ready for an
/// Episode or a trace file.
std::vector<TraceRecord> synthesize_records(const Script& script);

}  // namespace headteleop
