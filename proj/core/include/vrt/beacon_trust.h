#ifndef VRT_BEACON_TRUST_H
#define VRT_BEACON_TRUST_H

#include <cstdint>
#include <optional>
#include <vector>

#include "vrt/geometry.h"
#include "vrt/ground_truth.h"
#include "vrt/messages.h"

namespace vrt {

// |claimed - reference| / max(|reference|, eps)
double relative_discrepancy(double claimed, double reference);

struct ContentThresholds {
  double t_h1 = 0.10;  // relative tolerance, speed/density
  double t_h2 = 0.10;  // relative tolerance, sensor fields
  double t_h3 = 2.0;   // seconds, alert-to-beacon timestamp window
};

// Beacon counts of one observed RSU over the latest Z slots; slot Z is the
// most recent. Zero-padded before warm-up.
class BeaconRateHistory {
 public:
  explicit BeaconRateHistory(std::uint32_t z = 5) : counts_(z, 0) {}

  void push(std::uint32_t count);

  // Weighted average sum_{t=1..Z} (t/Z) * B_t. The weights sum to (Z+1)/2,
  // not 1; `normalize` divides that factor back out.
  double weighted_average(bool normalize = false) const;

  std::uint32_t z() const { return static_cast<std::uint32_t>(counts_.size()); }
  const std::vector<std::uint32_t>& counts() const { return counts_; }

 private:
  std::vector<std::uint32_t> counts_;  // oldest first
};

// True iff the current slot count exceeds the weighted historical average,
// i.e. a flooding attack verdict for this window.
bool flooding_check(const BeaconRateHistory& history, std::uint32_t current_count,
                    bool normalize = false);

struct SpeedDensity {
  double speed = 0.0;
  double density = 0.0;
};

// Stage-1 content check done by the observer RSU itself. With no vehicle
// sample from the claimed area the observer abstains (returns valid).
bool verify_speed_density(const SpeedDensity& observer_estimate,
                          const SpeedDensity& claimed, double t_h1,
                          bool has_samples = true);

// Vehicle-side sensor verification of an RSU beacon. Returns an alert with
// event_value=0 when any field's relative discrepancy strictly exceeds t_h2.
std::optional<TrafficAlert> vehicle_sensor_check(const Environment& sensed,
                                                 const Beacon& beacon,
                                                 const Position& rsu_position,
                                                 double t_h2, double now,
                                                 NodeId vehicle);

enum class RelayDecision : std::uint8_t { FORWARD, DROP };

// Relay re-verification of a received alert against the relay's own
// sensors and its copy of the referenced beacon. Relays that never saw the
// beacon forward unmodified.
RelayDecision relay_ignore_alert(const TrafficAlert& alert,
                                 const std::optional<Beacon>& own_beacon_copy,
                                 const Environment& own_sensors, double t_h2);

struct BeaconVerdict {
  std::uint64_t beacon_seq = 0;
  int beacon_bit = 1;     // 1 accept, 0 reject
  std::uint32_t x = 0;    // reporting vehicles, or total adjacent when none
};

// Combines the observer's speed/density check with the vehicle majority on
// sensor content. Checks run in order with short-circuit on first failure.
BeaconVerdict beacon_verdict(bool stage1_valid, std::uint32_t invalid_reports,
                             std::uint32_t total_reports,
                             std::uint32_t adjacent_vehicle_count,
                             std::uint64_t beacon_seq = 0);

// Weighted acceptance rate over the window's verdicts; w_i = X_i / sum X.
// No verdicts is neutral 0.5.
double trust_beacon(const std::vector<BeaconVerdict>& verdicts);

}  // namespace vrt

#endif
