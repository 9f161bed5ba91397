#ifndef VRT_METRICS_H
#define VRT_METRICS_H

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace vrt {

struct ConfusionCounts {
  std::uint32_t tp = 0;
  std::uint32_t fp = 0;
  std::uint32_t tn = 0;
  std::uint32_t fn = 0;

  std::uint32_t total() const { return tp + fp + tn + fn; }
};

// A metric with a zero denominator is undefined, not zero.
struct DetectionMetrics {
  std::optional<double> fpr;
  std::optional<double> fnr;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> accuracy;
};

DetectionMetrics detection_metrics(const ConfusionCounts& c);

struct NetworkCounters {
  std::uint64_t packets_sent = 0;
  std::uint64_t packets_received = 0;
  std::uint64_t bytes_received = 0;
  std::vector<double> latencies;  // seconds, one per received packet
};

struct NetworkMetrics {
  std::optional<double> pdr;
  std::optional<double> throughput_pps;
  std::optional<double> throughput_bps;
  std::optional<double> ae2e_delay;
};

// duration must be > 0.
NetworkMetrics network_metrics(const NetworkCounters& counters, double duration);

// ---- across-seed statistics ----

struct Aggregate {
  double mean = 0.0;
  double stderr_ = 0.0;
  double ci95_lo = 0.0;
  double ci95_hi = 0.0;
  std::uint32_t n = 0;
};

Aggregate aggregate(std::span<const double> samples);

// Spearman rank correlation; ties get average ranks. A constant series has
// no ordering information and yields 0.
double spearman(std::span<const double> x, std::span<const double> y);

// One-sided sign test: P(#positives >= observed | p = 1/2), zero diffs
// excluded.
double sign_test_p(std::span<const double> diffs);

}  // namespace vrt

#endif
