#include "headteleop/trace.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace headteleop {
namespace {

constexpr std::string_view kMagic = "#HAT-TRACE";
constexpr std::string_view kVersion = "v1";

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_num(std::string_view s, T& out) {
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

bool parse_angle(std::string_view s, float& out) {
  return parse_num(s, out) && std::isfinite(out);
}

}  // namespace

std::uint32_t record_time(const TraceRecord& r) {
  return std::visit([](const auto& rec) { return rec.t_ms; }, r);
}

std::string format_angle(float deg) {
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), deg, std::chars_format::fixed, 4);
  std::string s(buf.data(), p);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

OrientationSample canonical_sample(const OrientationSample& s) {
  auto q = [](float v) {
    const std::string text = format_angle(v);
    float out = 0.0F;
    std::from_chars(text.data(), text.data() + text.size(), out);
    return out;
  };
  OrientationSample out = normalized(s);
  out.roll = q(out.roll);
  out.pitch = q(out.pitch);
  out.yaw = q(out.yaw);
  // Rounding can land exactly on -180.
  return normalized(out);
}

std::string format_record(const TraceRecord& r) {
  std::ostringstream os;
  std::visit(
      [&](const auto& rec) {
        using T = std::decay_t<decltype(rec)>;
        if constexpr (std::is_same_v<T, OrientationSample>) {
          os << "S " << rec.t_ms << ' ' << rec.seq << ' ' << format_angle(rec.roll) << ' '
             << format_angle(rec.pitch) << ' ' << format_angle(rec.yaw);
        } else if constexpr (std::is_same_v<T, ControlEvent>) {
          os << "E " << rec.t_ms << ' ' << to_string(rec.kind);
        } else {
          os << "R " << rec.t_ms;
        }
      },
      r);
  return os.str();
}

std::string format_header(const TraceHeader& h) {
  std::string s(kMagic);
  s += ' ';
  s += kVersion;
  s += " scenario=" + h.scenario + " cfg=" + h.config_hash;
  return s;
}

Trace parse_trace(std::istream& in) {
  Trace trace;
  std::string raw;
  int line_no = 0;
  std::optional<std::uint32_t> last_t;
  std::optional<std::uint32_t> last_seq;

  auto corrupt = [&](const std::string& msg) -> CorruptTrace {
    return CorruptTrace("line " + std::to_string(line_no) + ": " + msg, line_no);
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto fields = split_ws(line);
    if (fields.empty()) continue;

    if (fields[0] == kMagic) {
      if (trace.header || !trace.records.empty()) throw corrupt("header must be the first line");
      if (fields.size() < 2 || fields[1] != kVersion) throw corrupt("unsupported trace version");
      TraceHeader h;
      for (std::size_t i = 2; i < fields.size(); ++i) {
        const auto eq = fields[i].find('=');
        if (eq == std::string_view::npos) throw corrupt("bad header field");
        const auto key = fields[i].substr(0, eq);
        const auto val = fields[i].substr(eq + 1);
        if (key == "scenario") h.scenario = std::string(val);
        if (key == "cfg") h.config_hash = std::string(val);
      }
      trace.header = std::move(h);
      continue;
    }
    if (line.front() == '#') {
      const auto fields_c = split_ws(line.substr(1));
      for (const auto f : fields_c) {
        const auto eq = f.find('=');
        if (trace.header && eq != std::string_view::npos && f.substr(0, eq) == "start_unix_ms") {
          std::int64_t v = 0;
          if (parse_num(f.substr(eq + 1), v)) trace.header->start_unix_ms = v;
        }
      }
      continue;
    }

    TraceRecord rec;
    if (fields[0] == "S") {
      OrientationSample s;
      if (fields.size() != 6 || !parse_num(fields[1], s.t_ms) || !parse_num(fields[2], s.seq) ||
          !parse_angle(fields[3], s.roll) || !parse_angle(fields[4], s.pitch) ||
          !parse_angle(fields[5], s.yaw)) {
        throw corrupt("malformed sample record");
      }
      if (last_seq && s.seq <= *last_seq) throw corrupt("sample sequence number does not increase");
      last_seq = s.seq;
      rec = normalized(s);
    } else if (fields[0] == "E") {
      ControlEvent e;
      std::optional<EventKind> kind;
      if (fields.size() != 3 || !parse_num(fields[1], e.t_ms) ||
          !(kind = event_kind_from_string(fields[2]))) {
        throw corrupt("malformed event record");
      }
      e.kind = *kind;
      rec = e;
    } else if (fields[0] == "R") {
      ResetRecord r;
      if (fields.size() != 2 || !parse_num(fields[1], r.t_ms)) throw corrupt("malformed reset record");
      rec = r;
    } else {
      throw corrupt("unknown record type '" + std::string(fields[0]) + "'");
    }

    const std::uint32_t t = record_time(rec);
    if (last_t && t < *last_t) throw corrupt("records out of order");
    last_t = t;
    trace.records.push_back(rec);
  }
  if (!trace.records.empty() && !trace.header) throw CorruptTrace("missing #HAT-TRACE header", 1);
  return trace;
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace '" + path + "'");
  return parse_trace(in);
}

void write_trace(std::ostream& out, const Trace& trace) {
  if (trace.header) {
    out << format_header(*trace.header) << '\n';
    if (trace.header->start_unix_ms) out << "# start_unix_ms=" << *trace.header->start_unix_ms << '\n';
  }
  for (const auto& r : trace.records) out << format_record(r) << '\n';
}

TraceRecorder::TraceRecorder(std::ostream& out, const TraceHeader& header) : out_(&out) {
  *out_ << format_header(header) << '\n';
  if (header.start_unix_ms) *out_ << "# start_unix_ms=" << *header.start_unix_ms << '\n';
}

void TraceRecorder::append(const TraceRecord& r) {
  *out_ << format_record(r) << '\n';
  ++count_;
}

void TraceRecorder::flush() { out_->flush(); }

}  // namespace headteleop
