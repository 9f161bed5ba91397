#include "vrt/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vrt {

namespace {

std::optional<double> ratio(double num, double den) {
  if (den <= 0.0) return std::nullopt;
  return num / den;
}

// Two-sided 97.5% Student-t quantile; exact values for small n, 1.96 tail.
double t_crit(std::uint32_t dof) {
  static const double table[] = {0.0,   12.706, 4.303, 3.182, 2.776, 2.571,
                                 2.447, 2.365,  2.306, 2.262, 2.228, 2.201,
                                 2.179, 2.160,  2.145, 2.131, 2.120, 2.110,
                                 2.101, 2.093,  2.086, 2.080, 2.074, 2.069,
                                 2.064, 2.060,  2.056, 2.052, 2.048, 2.045,
                                 2.042};
  if (dof == 0) return 0.0;
  if (dof <= 30) return table[dof];
  return 1.96 + 2.4 / dof;  // smooth approach to the normal quantile
}

}  // namespace

DetectionMetrics detection_metrics(const ConfusionCounts& c) {
  DetectionMetrics m;
  m.fpr = ratio(c.fp, static_cast<double>(c.fp) + c.tn);
  m.fnr = ratio(c.fn, static_cast<double>(c.fn) + c.tp);
  m.precision = ratio(c.tp, static_cast<double>(c.tp) + c.fp);
  m.recall = ratio(c.tp, static_cast<double>(c.tp) + c.fn);
  m.accuracy = ratio(static_cast<double>(c.tp) + c.tn, c.total());
  return m;
}

NetworkMetrics network_metrics(const NetworkCounters& counters,
                               double duration) {
  if (duration <= 0.0)
    throw std::invalid_argument("network_metrics: duration must be > 0");
  NetworkMetrics m;
  m.pdr = ratio(static_cast<double>(counters.packets_received),
                static_cast<double>(counters.packets_sent));
  m.throughput_pps = static_cast<double>(counters.packets_received) / duration;
  m.throughput_bps =
      static_cast<double>(counters.bytes_received) * 8.0 / duration;
  if (!counters.latencies.empty()) {
    const double sum =
        std::accumulate(counters.latencies.begin(), counters.latencies.end(), 0.0);
    m.ae2e_delay = sum / static_cast<double>(counters.latencies.size());
  }
  return m;
}

Aggregate aggregate(std::span<const double> samples) {
  Aggregate a;
  a.n = static_cast<std::uint32_t>(samples.size());
  if (a.n == 0) return a;
  a.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / a.n;
  if (a.n == 1) {
    a.ci95_lo = a.ci95_hi = a.mean;
    return a;
  }
  double ss = 0.0;
  for (double s : samples) ss += (s - a.mean) * (s - a.mean);
  const double sd = std::sqrt(ss / (a.n - 1));
  a.stderr_ = sd / std::sqrt(static_cast<double>(a.n));
  const double half = t_crit(a.n - 1) * a.stderr_;
  a.ci95_lo = a.mean - half;
  a.ci95_hi = a.mean + half;
  return a;
}

namespace {

std::vector<double> ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("spearman: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double num = 0.0, dx = 0.0, dy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (rx[i] - mean) * (ry[i] - mean);
    dx += (rx[i] - mean) * (rx[i] - mean);
    dy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (dx == 0.0 || dy == 0.0) return 0.0;  // constant series
  return num / std::sqrt(dx * dy);
}

double sign_test_p(std::span<const double> diffs) {
  std::uint32_t n = 0, pos = 0;
  for (double d : diffs) {
    if (d == 0.0) continue;
    ++n;
    if (d > 0.0) ++pos;
  }
  if (n == 0) return 1.0;
  // P(X >= pos) for X ~ Binomial(n, 1/2)
  double p = 0.0;
  for (std::uint32_t k = pos; k <= n; ++k) {
    double c = 0.0;  // log C(n, k)
    for (std::uint32_t i = 1; i <= k; ++i)
      c += std::log(static_cast<double>(n - k + i)) - std::log(static_cast<double>(i));
    p += std::exp(c - static_cast<double>(n) * std::log(2.0));
  }
  return std::min(1.0, p);
}

}  // namespace vrt
