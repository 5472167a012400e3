#pragma once

// Line-oriented session trace.
//
//   #HAT-TRACE v1 scenario=<id> cfg=<hex>
//   # start_unix_ms=<n>                       (optional comment lines)
//   S <t_ms> <seq> <roll> <pitch> <yaw>       angles with 4 decimals
//   E <t_ms> <kind>                           Start, SwitchArm, ...
//   R <t_ms>
//
// Records are sorted by t_ms; records sharing a timestamp apply in file order.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "headteleop/telemetry.hpp"

namespace headteleop {

struct ResetRecord {
  std::uint32_t t_ms = 0;
  friend bool operator==(const ResetRecord&, const ResetRecord&) = default;
};

using TraceRecord = std::variant<OrientationSample, ControlEvent, ResetRecord>;

std::uint32_t record_time(const TraceRecord& r);

struct TraceHeader {
  std::string scenario;
  std::string config_hash;
  std::optional<std::int64_t> start_unix_ms;

  friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

struct Trace {
  std::optional<TraceHeader> header;  // absent only for an empty file
  std::vector<TraceRecord> records;
};

class CorruptTrace : public std::runtime_error {
 public:
  CorruptTrace(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Rounds the sample's angles exactly as the trace writer prints them, so a
/// live run fed canonical samples replays bit-for-bit.
OrientationSample canonical_sample(const OrientationSample& s);

/// Formats one angle with 4 decimals ("-12.3456").
std::string format_angle(float deg);

std::string format_record(const TraceRecord& r);
std::string format_header(const TraceHeader& h);

/// Throws CorruptTrace on unparseable lines, timestamps that go backwards, or
/// sample sequence numbers that do not increase.
Trace parse_trace(std::istream& in);
Trace read_trace_file(const std::string& path);

void write_trace(std::ostream& out, const Trace& trace);

/// Append-only writer used while a session runs.
class TraceRecorder {
 public:
  TraceRecorder(std::ostream& out, const TraceHeader& header);

  void append(const TraceRecord& r);
  void flush();
  std::size_t size() const { return count_; }

 private:
  std::ostream* out_;
  std::size_t count_ = 0;
};

}  // namespace headteleop
