#include <benchmark/benchmark.h>

#include "manet/harness/scenario.hpp"
#include "manet/mobility/random_waypoint.hpp"
#include "manet/sim/rng.hpp"
#include "manet/sim/scheduler.hpp"

using namespace manet;

static void BM_SchedulerThroughput(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    sim::Scheduler s;
    sim::RngStream rng(1, sim::StreamId::traffic);
    std::uint64_t fired = 0;
    for (std::size_t i = 0; i < n; ++i) {
      s.schedule(rng.uniform(0.0, 100.0), 0, sim::EventKind::packet_send, [&fired] { ++fired; });
    }
    s.run(101.0);
    benchmark::DoNotOptimize(fired);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_SchedulerThroughput)->Arg(1 << 10)->Arg(1 << 16);

static void BM_TracePosition(benchmark::State& state) {
  harness::ScenarioConfig cfg;
  const auto trace = harness::build_trace(cfg);
  sim::RngStream rng(2, sim::StreamId::traffic);
  for (auto _ : state) {
    const auto node = static_cast<NodeId>(rng.below(trace.node_count()));
    benchmark::DoNotOptimize(trace.position_at(node, rng.uniform() * trace.duration()));
  }
}
BENCHMARK(BM_TracePosition);

static void BM_TraceGeneration(benchmark::State& state) {
  harness::ScenarioConfig cfg;
  cfg.model = harness::kSyntheticModels[state.range(0)];
  cfg.v_max = 20.0;
  for (auto _ : state) benchmark::DoNotOptimize(harness::build_trace(cfg));
  state.SetLabel(std::string(harness::to_string(cfg.model)));
}
BENCHMARK(BM_TraceGeneration)->DenseRange(0, 3);

static void BM_FullRun(benchmark::State& state) {
  harness::ScenarioConfig cfg;
  cfg.v_max = 20.0;
  cfg.load = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(harness::run_scenario(cfg));
}
BENCHMARK(BM_FullRun)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
