#include "vrt/beacon_trust.h"

#include <algorithm>
#include <cmath>

namespace vrt {

namespace {
constexpr double kEps = 1e-6;
}

double relative_discrepancy(double claimed, double reference) {
  return std::abs(claimed - reference) / std::max(std::abs(reference), kEps);
}

void BeaconRateHistory::push(std::uint32_t count) {
  counts_.erase(counts_.begin());
  counts_.push_back(count);
}

double BeaconRateHistory::weighted_average(bool normalize) const {
  const double z = static_cast<double>(counts_.size());
  double sum = 0.0;
  for (std::size_t t = 0; t < counts_.size(); ++t)
    sum += (static_cast<double>(t + 1) / z) * counts_[t];
  if (normalize) sum /= (z + 1.0) / 2.0;
  return sum;
}

bool flooding_check(const BeaconRateHistory& history,
                    std::uint32_t current_count, bool normalize) {
  return static_cast<double>(current_count) > history.weighted_average(normalize);
}

bool verify_speed_density(const SpeedDensity& observer_estimate,
                          const SpeedDensity& claimed, double t_h1,
                          bool has_samples) {
  if (!has_samples) return true;  // insufficient evidence, abstain
  return relative_discrepancy(claimed.speed, observer_estimate.speed) <= t_h1 &&
         relative_discrepancy(claimed.density, observer_estimate.density) <= t_h1;
}

std::optional<TrafficAlert> vehicle_sensor_check(const Environment& sensed,
                                                 const Beacon& beacon,
                                                 const Position& rsu_position,
                                                 double t_h2, double now,
                                                 NodeId vehicle) {
  const bool mismatch =
      relative_discrepancy(beacon.temperature, sensed.temperature) > t_h2 ||
      relative_discrepancy(beacon.humidity, sensed.humidity) > t_h2 ||
      relative_discrepancy(beacon.carbon_level, sensed.carbon_level) > t_h2;
  if (!mismatch) return std::nullopt;
  TrafficAlert alert;
  alert.sender_id = vehicle;
  alert.timestamp = now;
  alert.event_type = EventType::IGNORE_RSU;
  alert.event_value = 0;
  alert.location = rsu_position;
  alert.event_key = beacon.seq;
  return alert;
}

RelayDecision relay_ignore_alert(const TrafficAlert& alert,
                                 const std::optional<Beacon>& own_beacon_copy,
                                 const Environment& own_sensors, double t_h2) {
  if (!own_beacon_copy) return RelayDecision::FORWARD;  // cannot verify
  const bool own_mismatch =
      relative_discrepancy(own_beacon_copy->temperature, own_sensors.temperature) > t_h2 ||
      relative_discrepancy(own_beacon_copy->humidity, own_sensors.humidity) > t_h2 ||
      relative_discrepancy(own_beacon_copy->carbon_level, own_sensors.carbon_level) > t_h2;
  const bool alert_claims_invalid = alert.event_value == 0;
  return own_mismatch == alert_claims_invalid ? RelayDecision::FORWARD
                                              : RelayDecision::DROP;
}

BeaconVerdict beacon_verdict(bool stage1_valid, std::uint32_t invalid_reports,
                             std::uint32_t total_reports,
                             std::uint32_t adjacent_vehicle_count,
                             std::uint64_t beacon_seq) {
  BeaconVerdict v;
  v.beacon_seq = beacon_seq;
  if (!stage1_valid) {
    v.beacon_bit = 0;
    v.x = adjacent_vehicle_count;
    return v;
  }
  if (total_reports == 0) {
    v.beacon_bit = 1;
    v.x = adjacent_vehicle_count;
    return v;
  }
  const bool majority_invalid =
      2 * invalid_reports > total_reports;  // strict majority
  v.beacon_bit = majority_invalid ? 0 : 1;
  v.x = total_reports;
  return v;
}

double trust_beacon(const std::vector<BeaconVerdict>& verdicts) {
  if (verdicts.empty()) return 0.5;
  double x_sum = 0.0;
  for (const auto& v : verdicts) x_sum += v.x;
  if (x_sum == 0.0) {
    // Degenerate: no reporters and no adjacent vehicles; fall back to the
    // unweighted acceptance rate.
    double acc = 0.0;
    for (const auto& v : verdicts) acc += v.beacon_bit;
    return acc / static_cast<double>(verdicts.size());
  }
  double trust = 0.0;
  for (const auto& v : verdicts)
    trust += static_cast<double>(v.x) / x_sum * v.beacon_bit;
  return std::clamp(trust, 0.0, 1.0);  // guard one-ulp rounding overshoot
}

}  // namespace vrt
