// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Runs headlessly; the last check shells out to the CLI.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "headteleop/angles.hpp"
#include "headteleop/episode.hpp"
#include "headteleop/mapping.hpp"
#include "headteleop/robot_sim.hpp"
#include "headteleop/script.hpp"
#include "headteleop/session.hpp"
#include "headteleop/telemetry.hpp"
#include "headteleop/trace.hpp"
#include "oracle.hpp"

using namespace headteleop;

namespace {

const std::string kData = HEADTELEOP_DATA_DIR;

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  const char* name;
  double budget_s;  // 0 = no time bound
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// --- mapping ---------------------------------------------------------------

Outcome mapping_oracle() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> angles;
  angles.reserve(10'000);
  while (angles.size() < 10'000) {
    const double a = 180.0 - 360.0 * u(rng);  // (-180, 180]
    if (a > -180.0) angles.push_back(a);
  }
  for (double b : {-45.0, -15.0, 15.0, 45.0, 180.0}) angles.push_back(b);

  const AxisThresholds thr;
  double worst = 0.0;
  for (Actuator a : kAllActuators) {
    const ActuatorParams p = default_params(a);
    for (double th : angles) {
      const double want = oracle::velocity(th, 0.0, thr.low_pos, thr.high_pos, thr.low_neg,
                                           thr.high_neg, p.k, p.v_max);
      worst = std::max(worst, std::abs(axis_velocity(th, 0.0, thr, p) - want));
    }
  }
  return {worst <= 1e-9, fmt("%zu angles x 7 actuators, max |err| %.3g", angles.size(), worst)};
}

Outcome mapping_invariants() {
  const AxisThresholds thr;
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> ang(-180.0, 180.0);
  std::string failed;
  double worst_jump_ratio = 0.0;
  for (Actuator a : kAllActuators) {
    const ActuatorParams p = default_params(a);
    auto v = [&](double th, double tc = 0.0) { return axis_velocity(th, tc, thr, p); };
    double prev = v(-179.99);
    for (int i = -17999; i <= 18000; ++i) {
      const double th = i * 0.01;
      const double cur = v(th);
      if (std::abs(cur) > p.v_max) failed = "saturation bound";
      if (cur < prev) failed = "monotonicity";
      const double jump = std::abs(cur - prev);
      worst_jump_ratio = std::max(worst_jump_ratio, jump / (p.k * 0.01));
      if (jump > p.k * 0.011) failed = "continuity";
      if (th < 180.0 && std::abs(v(-th) + cur) > 1e-12) failed = "odd symmetry";
      prev = cur;
    }
    for (int i = 0; i < 20'000; ++i) {
      const double d = ang(rng);
      const double shift = ang(rng);
      if (std::abs(v(d + shift, shift) - v(d)) > 1e-9) failed = "calibration shift";
    }
  }
  if (!failed.empty()) return {false, "violated: " + failed};
  return {true, fmt("odd, monotone, bounded, shift-invariant; max grid jump %.4f k*0.01",
                    worst_jump_ratio)};
}

Outcome mapping_constants() {
  const AxisThresholds thr;
  if (thr.low_pos != 15.0 || thr.high_pos != 45.0 || thr.low_neg != -15.0 || thr.high_neg != -45.0) {
    return {false, "default thresholds are not +-15/+-45"};
  }
  for (Actuator a : kAllActuators) {
    const ActuatorParams p = default_params(a);
    auto v = [&](double th) { return axis_velocity(th, 0.0, thr, p); };
    if (v(10) != 0.0 || v(15) != 0.0 || v(45) != p.v_max || v(60) != p.v_max ||
        v(-60) != -p.v_max) {
      return {false, std::string("wrong value for ") + std::string(to_string(a))};
    }
  }
  return {true, "10->0, 15->0, 45->v_max, 60->v_max, -60->-v_max for every actuator"};
}

// --- session ---------------------------------------------------------------

Outcome safety_fuzz() {
  std::mt19937 rng(3);
  std::uniform_real_distribution<float> ang(-180.0F, 180.0F);
  std::uniform_int_distribution<int> pick(0, 99);
  std::uniform_int_distribution<int> kind(0, 5);
  std::uniform_int_distribution<std::uint32_t> gap(51, 2000);

  constexpr int kSteps = 200'000;
  std::uint64_t ticks = 0, moving = 0, gated_zero = 0, violations = 0;
  SessionConfig cfg;
  Session s(cfg);
  std::uint32_t t = 0, seq = 0;
  int shake_left = 0;
  for (int step = 0; step < kSteps; ++step) {
    const int r = pick(rng);
    if (shake_left > 0) {
      t += 50;
      const float yaw = static_cast<float>(15.0 * std::sin(2.0 * kPi * 2.0 * shake_left * 0.05));
      s.ingest_sample({++seq, t, 0.0F, ang(rng), yaw});
      --shake_left;
    } else if (r < 55) {
      t += (pick(rng) < 3) ? gap(rng) : 50;
      s.ingest_sample({++seq, t, ang(rng), ang(rng), ang(rng) * 0.1F});
    } else if (r < 65) {
      s.handle_event({t, static_cast<EventKind>(kind(rng))}, pick(rng) < 50);
    } else if (r < 67) {
      shake_left = 30;
    } else {
      const std::uint32_t now = t + static_cast<std::uint32_t>(pick(rng) * 6);
      const bool uncalibrated = s.phase() == Phase::Uncalibrated;
      const bool link_dead =
          !s.latest_sample() || now - s.latest_sample()->t_ms > cfg.watchdog_ms;
      const CommandFrame f = s.tick(now);
      ++ticks;
      // tick() can only end listening, never start it.
      const bool must_stop = uncalibrated || link_dead || s.awaiting_command();
      if (must_stop) ++gated_zero;
      if (!f.is_zero()) ++moving;
      if (must_stop && !f.is_zero()) ++violations;
      t = std::max(t, now);
    }
  }
  return {violations == 0 && moving > 0 && gated_zero > 0,
          fmt("%d steps, %llu ticks (%llu gated, %llu moving), %llu violations", kSteps,
              static_cast<unsigned long long>(ticks), static_cast<unsigned long long>(gated_zero),
              static_cast<unsigned long long>(moving), static_cast<unsigned long long>(violations))};
}

Outcome latest_wins() {
  std::mt19937 rng(4);
  std::uniform_real_distribution<float> ang(-70.0F, 70.0F);
  const std::array<Mode, 4> modes{Mode::Drive, Mode::Arm, Mode::Wrist, Mode::Gripper};
  const std::array<EventKind, 4> switches{EventKind::SwitchDrive, EventKind::SwitchArm,
                                          EventKind::SwitchWrist, EventKind::SwitchGripper};
  auto start = [](Session& s) {
    s.ingest_sample({0, 0, 0, 0, 0});
    s.handle_event({0, EventKind::Start}, false);
  };
  Session live;
  start(live);
  int mismatches = 0, differs_from_earlier = 0;
  constexpr int kTicks = 1000;
  for (int k = 0; k < kTicks; ++k) {
    const std::uint32_t base = 100U * static_cast<std::uint32_t>(k);
    if (k % 100 == 0) live.handle_event({base, switches[(k / 100) % 4]}, false);
    // Alternating poses: two 20 Hz samples per 10 Hz tick.
    const OrientationSample a{2U * k + 1, base + 50, ang(rng), ang(rng), 0};
    const OrientationSample b{2U * k + 2, base + 100, ang(rng), ang(rng), 0};
    live.ingest_sample(a);
    live.ingest_sample(b);
    const CommandFrame got = live.tick(base + 100);

    auto frame_from = [&](const OrientationSample& only) {
      Session ref;
      start(ref);
      ref.handle_event({0, switches[static_cast<std::size_t>(live.mode())]}, false);
      ref.ingest_sample(only);
      return ref.tick(base + 100);
    };
    if (modes[static_cast<std::size_t>(live.mode())] != live.mode()) ++mismatches;
    if (!(got == frame_from(b))) ++mismatches;
    if (!(frame_from(a) == got)) ++differs_from_earlier;
  }
  return {mismatches == 0 && differs_from_earlier > kTicks / 2,
          fmt("%d ticks, %d mismatches, %d ticks where the earlier sample would differ", kTicks,
              mismatches, differs_from_earlier)};
}

// --- telemetry -------------------------------------------------------------

Outcome protocol() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<float> ang(-179.999F, 180.0F);
  std::uniform_int_distribution<std::uint32_t> u32;
  constexpr int kSamples = 100'000;
  int roundtrip_failures = 0;
  std::vector<Frame> frames;
  frames.reserve(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    const OrientationSample s{u32(rng), u32(rng), ang(rng), ang(rng), ang(rng)};
    const Frame f = encode_sample(s);
    const auto r = decode_sample(f);
    const auto* back = std::get_if<OrientationSample>(&r);
    if (back == nullptr || back->seq != s.seq || back->t_ms != s.t_ms ||
        std::bit_cast<std::uint32_t>(back->roll) != std::bit_cast<std::uint32_t>(s.roll) ||
        std::bit_cast<std::uint32_t>(back->pitch) != std::bit_cast<std::uint32_t>(s.pitch) ||
        std::bit_cast<std::uint32_t>(back->yaw) != std::bit_cast<std::uint32_t>(s.yaw) ||
        encode_sample(*back) != f) {
      ++roundtrip_failures;
    }
    frames.push_back(f);
  }

  // Mutations: every single-bit flip of 500 frames, random byte rewrites of
  // all frames, and truncations/extensions.
  std::uint64_t mutations = 0, decoded = 0, typed_errors = 0, bad = 0;
  auto check = [&](std::span<const std::byte> bytes) {
    ++mutations;
    const auto r = decode_sample(bytes);
    if (const auto* s = std::get_if<OrientationSample>(&r)) {
      const bool sane = bytes.size() == kFrameSize && std::isfinite(s->roll) &&
                        std::isfinite(s->pitch) && std::isfinite(s->yaw) && s->roll > -180.0F &&
                        s->roll <= 180.0F && s->pitch > -180.0F && s->pitch <= 180.0F &&
                        s->yaw > -180.0F && s->yaw <= 180.0F;
      if (sane) {
        ++decoded;
      } else {
        ++bad;
      }
    } else {
      ++typed_errors;
    }
  };
  for (int i = 0; i < 500; ++i) {
    for (std::size_t bit = 0; bit < kFrameSize * 8; ++bit) {
      Frame f = frames[static_cast<std::size_t>(i)];
      f[bit / 8] ^= std::byte{static_cast<unsigned char>(1U << (bit % 8))};
      check(f);
    }
  }
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<std::size_t> pos(0, kFrameSize - 1);
  for (Frame f : frames) {
    for (int k = 0; k < 3; ++k) f[pos(rng)] = static_cast<std::byte>(byte(rng));
    check(f);
  }
  for (std::size_t n = 0; n <= 2 * kFrameSize; ++n) {
    std::vector<std::byte> v(n);
    for (auto& b : v) b = static_cast<std::byte>(byte(rng));
    check(v);
  }
  return {roundtrip_failures == 0 && bad == 0,
          fmt("%d round-trips (%d failed); %llu mutations: %llu decoded, %llu typed errors, %llu bad",
              kSamples, roundtrip_failures, static_cast<unsigned long long>(mutations),
              static_cast<unsigned long long>(decoded),
              static_cast<unsigned long long>(typed_errors), static_cast<unsigned long long>(bad))};
}

// --- scenarios -------------------------------------------------------------

Outcome expert_traces() {
  std::string detail;
  bool ok = true;
  for (const char* id : {"cup", "trash", "blanket", "cleaning"}) {
    try {
      const Trace t = read_trace_file(kData + "/traces/" + id + ".trace");
      const Scenario sc = load_scenario(id);
      const auto a = replay(t, sc, {}, {});
      const auto b = replay(t, sc, {}, {});
      const bool same = a.metrics == b.metrics && a.robot == b.robot &&
                        std::memcmp(&a.metrics.task_time_s, &b.metrics.task_time_s, sizeof(double)) == 0 &&
                        std::memcmp(&a.metrics.commanded_distance, &b.metrics.commanded_distance,
                                    sizeof(double)) == 0 &&
                        std::memcmp(&a.metrics.nonzero_command_fraction,
                                    &b.metrics.nonzero_command_fraction, sizeof(double)) == 0;
      const bool good = same && a.metrics.completed && a.metrics.task_time_s < 840.0;
      ok = ok && good;
      detail += fmt("%s %.1fs%s; ", id, a.metrics.task_time_s, good ? "" : " (FAILED)");
    } catch (const std::exception& e) {
      ok = false;
      detail += std::string(id) + ": " + e.what() + "; ";
    }
  }
  return {ok, detail + "identical on replay"};
}

// --- robot sim -------------------------------------------------------------

Outcome simulator_limits() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> vel(-2.0, 2.0);
  std::uniform_real_distribution<double> dt(0.001, 0.5);
  std::uniform_int_distribution<int> pick(0, 9);
  const ActuatorLimits lim;
  WorldState w = load_scenario("practice").initial_world();
  constexpr int kSteps = 1'000'000;
  int violations = 0, attaches = 0;
  for (int i = 0; i < kSteps; ++i) {
    CommandFrame f;
    for (double& v : f.velocity) v = pick(rng) < 3 ? 0.0 : vel(rng);
    // Occasional huge commands to slam every joint into its stops.
    if (pick(rng) == 0) {
      for (double& v : f.velocity) v *= 1e6;
    }
    const auto r = step(w, f, dt(rng), lim);
    if (const auto* rep = std::get_if<StepReport>(&r); rep && rep->attached) ++attaches;
    if (!within_limits(w.robot, lim)) ++violations;
    if (i % 100'000 == 0) w.robot = home_state();
  }
  return {violations == 0, fmt("%d steps, %d out-of-limit states", kSteps, violations)};
}

// --- CLI -------------------------------------------------------------------

Outcome blanket_sequence() {
  const std::string script = kData + "/scripts/blanket.script";

  // Shape: the motions happen as turn left, extend, open, lift, drive forward.
  const Trace t{TraceHeader{"blanket", "", std::nullopt},
                synthesize_records(read_script_file(script))};
  Episode ep(load_scenario("blanket"), {}, {}, false);
  std::vector<std::string> phases;
  ep.set_tick_observer([&](const TickInfo& info) {
    std::string p;
    const auto& f = info.frame;
    if (f[Actuator::BaseRotate] < 0) p = "turn-left";
    if (f[Actuator::ArmExtend] > 0) p = "extend";
    if (f[Actuator::Gripper] > 0) p = "open";
    if (f[Actuator::Gripper] < 0) p = "close";
    if (f[Actuator::Lift] > 0) p = "lift";
    if (f[Actuator::BaseTranslate] > 0) p = "drive-forward";
    if (!p.empty() && (phases.empty() || phases.back() != p)) phases.push_back(p);
  });
  for (const auto& r : t.records) ep.apply(r);
  const std::vector<std::string> want = {"turn-left", "extend", "open", "lift", "drive-forward"};
  std::size_t matched = 0;
  for (const auto& p : phases) {
    if (matched < want.size() && p == want[matched]) ++matched;
  }
  std::string seq;
  for (const auto& p : phases) seq += (seq.empty() ? "" : " > ") + p;

  const std::string cmd = std::string(HEADTELEOP_CLI) + " simulate --scenario blanket --script " +
                          script + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {matched == want.size() && code == 0, fmt("cli exit %d; ", code) + seq};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"mapping oracle equivalence", 1.0, mapping_oracle},
      {"mapping invariant suite", 10.0, mapping_invariants},
      {"mapping default constants", 0.0, mapping_constants},
      {"safety gates under fuzzing", 0.0, safety_fuzz},
      {"protocol round-trip and mutations", 0.0, protocol},
      {"rate conversion latest-wins", 0.0, latest_wins},
      {"expert traces replay", 30.0, expert_traces},
      {"simulator limits", 0.0, simulator_limits},
      {"scripted blanket sequence via cli simulate", 0.0, blanket_sequence},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && secs >= c.budget_s) {
      o.ok = false;
      o.detail += fmt(" (over the %.0fs budget)", c.budget_s);
    }
    if (!o.ok) ++failures;
    std::printf("%s  %-44s %7.3fs  %s\n", o.ok ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
