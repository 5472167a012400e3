#include <gtest/gtest.h>

#include <sstream>

#include "headteleop/config.hpp"
#include "headteleop/episode.hpp"
#include "headteleop/script.hpp"

using namespace headteleop;

namespace {

const std::string kData = HEADTELEOP_DATA_DIR;

Trace trace_of(std::vector<TraceRecord> records) {
  Trace t;
  t.header = TraceHeader{"cup", config_hash({}, {}), std::nullopt};
  t.records = std::move(records);
  return t;
}

Trace scripted(const std::string& text) {
  std::istringstream in(text);
  return trace_of(synthesize_records(parse_script(in)));
}

}  // namespace

TEST(Metrics, EmptyTrace) {
  const auto m = compute_metrics(Trace{}, load_scenario("cup"));
  EXPECT_FALSE(m.completed);
  EXPECT_DOUBLE_EQ(m.task_time_s, 840.0);
  EXPECT_EQ(m.ticks, 0U);
  EXPECT_EQ(format_metrics(m),
            "completed=false\ntask_time_s=840.000\nmode_switches=0\nresets=0\n"
            "commanded_distance=0.000000\nnonzero_command_fraction=0.000000\nticks=0\n");
}

TEST(Metrics, ResetsDoNotTouchTheClock) {
  auto t = read_trace_file(kData + "/traces/cup.trace");
  const auto base = compute_metrics(t, load_scenario("cup"));
  ASSERT_TRUE(base.completed);
  // Two resets at the very beginning, before anything moved.
  t.records.insert(t.records.begin() + 1, ResetRecord{0});
  t.records.insert(t.records.begin() + 1, ResetRecord{0});
  const auto m = compute_metrics(t, load_scenario("cup"));
  EXPECT_EQ(m.resets, 2);
  EXPECT_DOUBLE_EQ(m.task_time_s, base.task_time_s);
  EXPECT_TRUE(m.completed);
}

TEST(Metrics, ResetRestoresWorld) {
  const Scenario sc = load_scenario("practice");
  Episode ep(sc, {}, {}, false);
  ep.apply(OrientationSample{0, 0, 0, 0, 0});
  ep.apply(ControlEvent{0, EventKind::Start});
  for (std::uint32_t i = 1; i <= 20; ++i) ep.apply(OrientationSample{i, i * 50, 0, 60, 0});
  EXPECT_GT(ep.world().robot.base_x, 0.1);
  ep.apply(ResetRecord{1000});
  EXPECT_EQ(ep.world(), sc.initial_world());
  EXPECT_EQ(ep.metrics().resets, 1);
  EXPECT_EQ(ep.now_ms(), 900U);
  // The session keeps its mode and calibration; motion resumes.
  ep.apply(OrientationSample{21, 1050, 0, 60, 0});
  ep.advance_to(1100);
  EXPECT_GT(ep.world().robot.base_x, 0.0);
}

TEST(Metrics, ExpertCupTrace) {
  const auto m = compute_metrics(read_trace_file(kData + "/traces/cup.trace"), load_scenario("cup"));
  EXPECT_TRUE(m.completed);
  EXPECT_LT(m.task_time_s, 840.0);
  EXPECT_GE(m.mode_switches, 2);
  EXPECT_GT(m.nonzero_command_fraction, 0.0);
  EXPECT_LE(m.nonzero_command_fraction, 1.0);
}

TEST(Replay, Deterministic) {
  for (const char* id : {"cup", "trash", "blanket", "cleaning", "practice"}) {
    const auto t = read_trace_file(kData + "/traces/" + id + ".trace");
    const auto a = replay(t, load_scenario(id), {}, {});
    const auto b = replay(t, load_scenario(id), {}, {});
    EXPECT_EQ(a.metrics, b.metrics) << id;
    EXPECT_EQ(a.robot, b.robot) << id;
    EXPECT_EQ(a.world, b.world) << id;
    EXPECT_TRUE(a.metrics.completed) << id;
    EXPECT_FALSE(a.config_mismatch) << id;
  }
}

TEST(Replay, OutOfOrderIsCorrupt) {
  const auto t = trace_of({OrientationSample{0, 100, 0, 0, 0}, ControlEvent{50, EventKind::Start}});
  EXPECT_THROW(replay(t, load_scenario("cup"), {}, {}), CorruptTrace);
}

TEST(Replay, ConfigMismatchIsReported) {
  auto t = trace_of({OrientationSample{0, 0, 0, 0, 0}});
  t.header->config_hash = "ffffffffffffffff";
  EXPECT_TRUE(replay(t, load_scenario("cup"), {}, {}).config_mismatch);
}

TEST(Replay, RecordedRunMatchesLive) {
  // Drive an Episode record by record, recording as we go, then replay.
  const auto src = read_trace_file(kData + "/traces/trash.trace");
  const Scenario sc = load_scenario("trash");
  Episode live(sc, {}, {}, false);
  std::stringstream file;
  TraceRecorder rec(file, *src.header);
  for (const auto& r : src.records) {
    rec.append(r);
    live.apply(r);
  }
  live.advance_to(record_time(src.records.back()));
  rec.flush();
  const auto back = replay(parse_trace(file), sc, {}, {});
  EXPECT_EQ(back.metrics, live.metrics());
  EXPECT_EQ(back.robot, live.world().robot);
}

TEST(Episode, TickSchedule) {
  Episode ep(load_scenario("cup"), {}, {}, false);
  ep.apply(OrientationSample{0, 0, 0, 0, 0});
  EXPECT_EQ(ep.metrics().ticks, 0U);
  ep.apply(OrientationSample{1, 100, 0, 0, 0});
  EXPECT_EQ(ep.now_ms(), 0U);  // the tick at 100 waits for records at 100
  ep.apply(OrientationSample{2, 150, 0, 0, 0});
  EXPECT_EQ(ep.now_ms(), 100U);
  EXPECT_EQ(ep.metrics().ticks, 1U);
  ep.advance_to(1000);
  EXPECT_EQ(ep.metrics().ticks, 10U);
  ep.advance_to(2'000'000);
  EXPECT_EQ(ep.now_ms(), ep.time_limit_ms());
  EXPECT_EQ(ep.metrics().ticks, 8400U);
  EXPECT_FALSE(ep.apply(ControlEvent{900'000, EventKind::Start}));
}

TEST(Episode, DriveScriptDistance) {
  const Trace t = scripted(
      "0 pose 0 0 0\n100 event start\n500 pose 0 0 0\n500 pose 0 30 0\n2500 pose 0 30 0\n"
      "2500 pose 0 0 0\n3000 pose 0 0 0\n");
  const auto r = replay(t, load_scenario("practice"), {}, {});
  EXPECT_NEAR(r.metrics.commanded_distance, 0.3, 1e-12);
  EXPECT_NEAR(r.robot.base_x, 0.3, 1e-12);
  EXPECT_FALSE(r.metrics.completed);
  EXPECT_DOUBLE_EQ(r.metrics.task_time_s, 840.0);
}

TEST(Episode, NoStartNoMotion) {
  const Trace t = scripted("0 pose 0 50 50\n5000 pose 50 -50 0\n");
  const auto r = replay(t, load_scenario("cup"), {}, {});
  EXPECT_EQ(r.robot, home_state());
  EXPECT_EQ(r.metrics.commanded_distance, 0.0);
  EXPECT_EQ(r.metrics.nonzero_command_fraction, 0.0);
  EXPECT_FALSE(r.metrics.completed);
}

TEST(Episode, SuccessLatches) {
  // Finish the cup task, then pick the cup back up and carry it away.
  auto t = read_trace_file(kData + "/traces/cup.trace");
  const auto done = compute_metrics(t, load_scenario("cup"));
  std::uint32_t time = record_time(t.records.back());
  std::uint32_t seq = std::get<OrientationSample>(t.records.back()).seq;
  t.records.emplace_back(ControlEvent{time, EventKind::SwitchGripper});
  for (int i = 0; i < 20; ++i) t.records.emplace_back(OrientationSample{++seq, time += 50, 0, -50, 0});
  t.records.emplace_back(ControlEvent{time, EventKind::SwitchDrive});
  for (int i = 0; i < 40; ++i) t.records.emplace_back(OrientationSample{++seq, time += 50, 0, 50, 0});
  const auto r = replay(t, load_scenario("cup"), {}, {});
  EXPECT_TRUE(r.robot.held_object);
  EXPECT_TRUE(r.metrics.completed);
  EXPECT_DOUBLE_EQ(r.metrics.task_time_s, done.task_time_s);
}

TEST(Episode, TickObserver) {
  Episode ep(load_scenario("cup"), {}, {}, true);
  int ticks = 0;
  ep.set_tick_observer([&](const TickInfo& info) {
    ++ticks;
    EXPECT_EQ(info.gate, TickGate::Uncalibrated);
    EXPECT_TRUE(info.frame.is_zero());
  });
  ep.apply(OrientationSample{0, 0, 0, 0, 0});
  EXPECT_EQ(ep.apply(ControlEvent{0, EventKind::Start}), EventOutcome::NotListening);
  ep.advance_to(500);
  EXPECT_EQ(ticks, 5);
}
