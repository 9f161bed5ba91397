#ifndef VRT_SIMULATION_H
#define VRT_SIMULATION_H

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "vrt/adversary.h"
#include "vrt/alert_trust.h"
#include "vrt/beacon_trust.h"
#include "vrt/config.h"
#include "vrt/event_queue.h"
#include "vrt/geometry.h"
#include "vrt/ground_truth.h"
#include "vrt/metrics.h"
#include "vrt/mobility.h"
#include "vrt/routing.h"
#include "vrt/rng.h"
#include "vrt/trust.h"
#include "vrt/watchdog.h"

namespace vrt {

struct TrustSample {
  std::uint32_t window = 0;
  std::uint32_t evaluator = 0;
  std::uint32_t subject = 0;
  double trust_direct = 0.0;
  double trust_used = 0.0;  // direct for one-hop subjects, Q otherwise
  double threshold = 0.5;
  Classification classification = Classification::COMPROMISED;
};

struct PacketStats {
  std::uint64_t injected = 0;
  std::uint64_t delivered = 0;            // includes corrupted deliveries
  std::uint64_t delivered_modified = 0;   // subset of delivered
  std::uint64_t dropped_by_malice = 0;    // adversarial drops, retries exhausted
  std::uint64_t dropped_no_route = 0;
  std::uint64_t dropped_hop_limit = 0;
  std::uint64_t in_flight_at_end = 0;

  std::uint64_t closed() const {
    return delivered + dropped_by_malice + dropped_no_route + dropped_hop_limit;
  }
};

struct RunResult {
  ScenarioConfig config;  // resolved configuration, embedded for audit
  std::uint64_t seed = 0;

  std::vector<bool> rsu_malicious;          // ground truth roles
  std::vector<Classification> verdicts;     // per-RSU consensus verdict
  ConfusionCounts confusion;                // consensus scoring
  ConfusionCounts confusion_per_pair;       // every (evaluator, subject) pair
  DetectionMetrics detection;

  NetworkCounters net_counters;
  NetworkMetrics net_metrics;
  PacketStats packets;

  std::vector<TrustSample> trust_series;
  // Final ledger per evaluator (one-hop and Q-derived subjects).
  std::vector<TrustLedger> final_ledgers;

  std::uint64_t beacons_sent = 0;
  std::uint64_t alerts_sent = 0;
  std::uint64_t events_processed = 0;
  std::uint32_t windows_completed = 0;
};

// Executes one scenario. Strictly single-threaded and deterministic:
// identical (config, seed) produces identical results.
RunResult run(const ScenarioConfig& config);

// ---- internals exposed for the engine-level tests ----

// Delivery delay for a message of `bits` over `dist` meters: transmission
// plus propagation (queuing is an accounting allowance, not simulated).
double propagation_and_tx_delay(double bits, double dist, double tx_rate,
                                double v_prop);

}  // namespace vrt

#endif
