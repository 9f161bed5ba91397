#ifndef VRT_ADVERSARY_H
#define VRT_ADVERSARY_H

#include <cstdint>
#include <vector>

#include "vrt/rng.h"

namespace vrt {

struct AdversaryProfile {
  // RSU behaviors
  double rsu_drop_p = 0.5;
  double rsu_modify_p = 0.5;
  double rsu_flood_p = 0.5;
  double rsu_beacon_falsify_p = 0.5;
  double rsu_alert_alter_p = 0.5;
  // Vehicle behaviors
  double veh_false_ignore_p = 0.5;
  double veh_suppress_or_flip_p = 0.5;
  double veh_alert_modify_p = 0.5;
  // Population fractions
  double mr = 0.0;  // malicious RSU fraction
  double mv = 0.0;  // malicious vehicle fraction

  double flood_burst_factor = 5.0;     // beacons per period while flooding
  double falsify_factor = 1.5;         // perturbation in units of the threshold
};

struct RoleMap {
  std::vector<bool> rsu_malicious;
  std::vector<bool> vehicle_malicious;

  std::uint32_t malicious_rsus() const;
  std::uint32_t malicious_vehicles() const;
};

// Flags exactly round(mr * n_rsus) RSUs and round(mv * n_vehicles)
// vehicles, chosen uniformly from the role stream.
RoleMap assign_roles(Rng& rng, std::uint32_t n_rsus, std::uint32_t n_vehicles,
                     double mr, double mv);

enum class RelayAction : std::uint8_t { FORWARD, FORWARD_MODIFIED, DROP };

// Malicious relay decision: drop, else forward with an independent
// modification draw.
RelayAction rsu_on_relay(const AdversaryProfile& profile, Rng& rng);

struct BeaconTickPlan {
  std::uint32_t burst = 1;   // beacons to emit this period
  bool falsify = false;      // perturb content fields
};

// Malicious beacon emission plan for one period.
BeaconTickPlan rsu_on_beacon_tick(const AdversaryProfile& profile, Rng& rng);

enum class VehicleAlertAction : std::uint8_t { PASS, DROP, FLIP };

// Malicious vehicle decision when handling an alert it would relay.
VehicleAlertAction vehicle_on_relay_alert(double p, Rng& rng);

}  // namespace vrt

#endif
