#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "headteleop/episode.hpp"
#include "headteleop/mapping.hpp"
#include "headteleop/robot_sim.hpp"
#include "headteleop/session.hpp"
#include "headteleop/telemetry.hpp"
#include "headteleop/trace.hpp"

using namespace headteleop;

namespace {

std::vector<double> random_angles(std::size_t n) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-180.0, 180.0);
  std::vector<double> v(n);
  for (auto& a : v) a = d(rng);
  return v;
}

void BM_AxisVelocity(benchmark::State& state) {
  const auto angles = random_angles(4096);
  const AxisThresholds thr;
  const ActuatorParams p = default_params(Actuator::BaseTranslate);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(axis_velocity(angles[i++ & 4095], 3.0, thr, p));
  }
}
BENCHMARK(BM_AxisVelocity);

void BM_EncodeDecode(benchmark::State& state) {
  const auto angles = random_angles(4096);
  std::uint32_t i = 0;
  for (auto _ : state) {
    const float a = static_cast<float>(angles[i & 4095]);
    const Frame f = encode_sample({i, i * 50, a, -a, a * 0.5F});
    benchmark::DoNotOptimize(decode_sample(f));
    ++i;
  }
}
BENCHMARK(BM_EncodeDecode);

// Ingest two samples and tick, i.e. the per-100 ms work of a live session.
void BM_SessionTick(benchmark::State& state) {
  const auto angles = random_angles(4096);
  Session s;
  s.ingest_sample({0, 0, 0, 0, 0});
  s.handle_event({0, EventKind::Start}, false);
  std::uint32_t t = 0, seq = 0;
  for (auto _ : state) {
    t += 50;
    s.ingest_sample({++seq, t, static_cast<float>(angles[seq & 4095]), static_cast<float>(angles[(seq * 7) & 4095]), 0});
    t += 50;
    s.ingest_sample({++seq, t, static_cast<float>(angles[seq & 4095]), static_cast<float>(angles[(seq * 7) & 4095]), 0});
    benchmark::DoNotOptimize(s.tick(t));
  }
}
BENCHMARK(BM_SessionTick);

void BM_SimStep(benchmark::State& state) {
  WorldState w = load_scenario("cup").initial_world();
  const ActuatorLimits lim;
  CommandFrame f;
  f.velocity = {0.05, 0.1, 0.02, 0.03, 0.1, 0.1, 0.2};
  int n = 0;
  for (auto _ : state) {
    if (++n % 200 == 0) {
      for (double& v : f.velocity) v = -v;
    }
    benchmark::DoNotOptimize(step(w, f, 0.1, lim));
  }
}
BENCHMARK(BM_SimStep);

void BM_ReplayTrace(benchmark::State& state) {
  const Trace t = read_trace_file(std::string(HEADTELEOP_DATA_DIR) + "/traces/cup.trace");
  const Scenario sc = load_scenario("cup");
  for (auto _ : state) {
    benchmark::DoNotOptimize(replay(t, sc, {}, {}));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(t.records.size()));
}
BENCHMARK(BM_ReplayTrace)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
