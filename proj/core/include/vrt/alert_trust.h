#ifndef VRT_ALERT_TRUST_H
#define VRT_ALERT_TRUST_H

#include <optional>
#include <vector>

#include "vrt/messages.h"

namespace vrt {

// Positions inside this radius refer to the same place; continuous
// coordinates never compare exactly.
inline constexpr double kAlertLocationRadius = 10.0;  // meters

bool same_alert_location(const Position& a, const Position& b);

struct RelayOutcome {
  bool forward = false;
  int event_value = 0;  // content to forward when forward is true
};

// Vehicle-side relay rule for event alerts: observers forward their own
// sensed value; non-observers forward the plurality content of the copies
// they received, dropping on a tie.
RelayOutcome vehicle_relay_event_alert(const std::vector<int>& received_values,
                                       bool is_observer, int sensed_value);

// Per-event trust bit the observer RSU assigns to its neighbor from the
// neighbor's alert and the vehicle alerts collected for the same event.
//   - neither RSU alert nor vehicle alerts: 1 (no event occurred)
//   - RSU silent while vehicle alerts exist: 0 (suppression)
//   - otherwise: majority match count per the pairwise comparison;
//     the timestamp criterion is one-sided, rsu.ts - vehicle.ts <= t_h.
int trust_alert(const std::optional<TrafficAlert>& rsu_alert,
                const std::vector<TrafficAlert>& vehicle_alerts, double t_h);

}  // namespace vrt

#endif
