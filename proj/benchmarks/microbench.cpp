#include <benchmark/benchmark.h>

#include "vrt/config.h"
#include "vrt/digest.h"
#include "vrt/event_queue.h"
#include "vrt/rng.h"
#include "vrt/routing.h"
#include "vrt/simulation.h"
#include "vrt/trust.h"

namespace {

void BM_EventQueueChurn(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    vrt::EventQueue q;
    vrt::Rng rng(1, vrt::RngStream::Events);
    for (int i = 0; i < n; ++i) {
      vrt::Event ev;
      ev.fire_time = rng.uniform(0.0, 1000.0);
      q.schedule(ev);
    }
    while (!q.empty()) benchmark::DoNotOptimize(q.pop());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_EventQueueChurn)->Arg(1000)->Arg(10000);

void BM_PacketDigest(benchmark::State& state) {
  vrt::DataPacket p;
  p.immutable_payload.resize(static_cast<std::size_t>(state.range(0)), 0x5A);
  for (auto _ : state) benchmark::DoNotOptimize(vrt::packet_digest(p));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PacketDigest)->Arg(64)->Arg(512)->Arg(4096);

void BM_TrustWindow(benchmark::State& state) {
  vrt::Rng rng(2, vrt::RngStream::Events);
  for (auto _ : state) {
    vrt::DirectTrustInputs in;
    in.trust_routing = rng.uniform(0.0, 1.0);
    in.trust_beacon = rng.uniform(0.0, 1.0);
    in.f_routing = rng.uniform(0.0, 100.0);
    in.f_beacon = rng.uniform(0.0, 100.0);
    benchmark::DoNotOptimize(vrt::direct_trust_window(in));
  }
}
BENCHMARK(BM_TrustWindow);

void BM_ReactiveDiscovery(benchmark::State& state) {
  vrt::Backbone bb;
  const std::uint32_t side = 5;
  bb.adj.resize(side * side);
  for (std::uint32_t y = 0; y < side; ++y)
    for (std::uint32_t x = 0; x < side; ++x) {
      const std::uint32_t u = y * side + x;
      if (x + 1 < side) {
        bb.adj[u].push_back(u + 1);
        bb.adj[u + 1].push_back(u);
      }
      if (y + 1 < side) {
        bb.adj[u].push_back(u + side);
        bb.adj[u + side].push_back(u);
      }
    }
  vrt::ReactiveRouting rr(bb);
  for (auto _ : state) {
    rr.invalidate_through(12);  // force rediscovery through the center
    benchmark::DoNotOptimize(rr.route(0, 24, false, nullptr));
  }
}
BENCHMARK(BM_ReactiveDiscovery);

void BM_ShortRun(benchmark::State& state) {
  vrt::ScenarioConfig cfg = vrt::desk_scale_config();
  cfg.sim_duration = 60.0;
  cfg.adversary.mr = 0.4;
  cfg.adversary.mv = 0.2;
  for (auto _ : state) {
    cfg.seed = static_cast<std::uint64_t>(state.iterations());
    benchmark::DoNotOptimize(vrt::run(cfg));
  }
}
BENCHMARK(BM_ShortRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
