#include "vrt/alert_trust.h"

#include "vrt/geometry.h"

namespace vrt {

bool same_alert_location(const Position& a, const Position& b) {
  return distance(a, b) <= kAlertLocationRadius;
}

RelayOutcome vehicle_relay_event_alert(const std::vector<int>& received_values,
                                       bool is_observer, int sensed_value) {
  if (is_observer) return {true, sensed_value};
  std::size_t ones = 0;
  for (int v : received_values)
    if (v == 1) ++ones;
  const std::size_t zeros = received_values.size() - ones;
  if (ones == zeros) return {false, 0};  // tie (or no copies): drop
  return {true, ones > zeros ? 1 : 0};
}

int trust_alert(const std::optional<TrafficAlert>& rsu_alert,
                const std::vector<TrafficAlert>& vehicle_alerts, double t_h) {
  if (!rsu_alert) return vehicle_alerts.empty() ? 1 : 0;
  std::size_t y = 0;
  std::size_t n = 0;
  for (const auto& mv : vehicle_alerts) {
    const bool match = rsu_alert->event_type == mv.event_type &&
                       rsu_alert->event_value == mv.event_value &&
                       same_alert_location(rsu_alert->location, mv.location) &&
                       rsu_alert->timestamp - mv.timestamp <= t_h;
    if (match)
      ++y;
    else
      ++n;
  }
  return y > n ? 1 : 0;
}

}  // namespace vrt
