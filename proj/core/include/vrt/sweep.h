#ifndef VRT_SWEEP_H
#define VRT_SWEEP_H

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vrt/config.h"
#include "vrt/metrics.h"
#include "vrt/simulation.h"

namespace vrt {

// One configuration variant inside a sweep.
struct SweepPoint {
  double mr = 0.0;
  double mv = 0.0;
  RoutingProtocol protocol = RoutingProtocol::Reactive;
  bool trust_filter = false;
};

struct SweepSpec {
  ScenarioConfig base;
  std::vector<double> mr_values{0.0};
  std::vector<double> mv_values{0.0};
  // Protocol/filter variants evaluated at every (mr, mv) grid point.
  std::vector<std::pair<RoutingProtocol, bool>> variants;
  std::vector<std::uint64_t> seeds{1};
};

// Aggregated across seeds: one row per (point, metric).
struct SweepRow {
  SweepPoint point;
  std::string metric;
  Aggregate agg;
  std::uint64_t seed_hash = 0;  // digest of the seeds that produced the row
};

// Order-insensitive content hash of the seed list actually aggregated.
std::uint64_t seed_list_hash(const std::vector<std::uint64_t>& seeds);

// Runs the full grid sequentially and deterministically. `observer`, when
// set, receives every raw run (used by the CLI for per-run dumps).
std::vector<SweepRow> run_sweep(
    const SweepSpec& spec,
    const std::function<void(const SweepPoint&, const RunResult&)>& observer =
        nullptr);

}  // namespace vrt

#endif
