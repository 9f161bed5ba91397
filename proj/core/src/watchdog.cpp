#include "vrt/watchdog.h"

#include <stdexcept>

namespace vrt {

double expected_forward_time(double length_bits, double rate, double d,
                             double v_prop, double t_other) {
  if (rate <= 0.0)
    throw std::invalid_argument("expected_forward_time: rate must be > 0");
  if (v_prop <= 0.0)
    throw std::invalid_argument("expected_forward_time: v_prop must be > 0");
  return length_bits / rate + d / v_prop + t_other;
}

void WatchdogBuffer::on_forward_to_next_hop(const DataPacket& packet,
                                            NodeId next_hop, double now,
                                            double t_expected) {
  auto [it, inserted] = entries_.try_emplace(
      packet.id,
      Entry{packet_digest(packet), now, next_hop, now + t_expected});
  if (!inserted)
    throw std::invalid_argument("WatchdogBuffer: duplicate packet id");
}

bool WatchdogBuffer::on_overhear(const DataPacket& packet, NodeId forwarder,
                                 double /*now*/, RoutingObservation& obs) {
  auto it = entries_.find(packet.id);
  if (it == entries_.end() || !(it->second.next_hop == forwarder))
    return false;  // not a packet we are watching, or wrong relay
  if (packet_digest(packet) == it->second.digest)
    ++obs.pf;
  else
    obs.pm = 0;  // modification zeroes the whole window
  entries_.erase(it);
  return true;
}

bool WatchdogBuffer::on_timeout(std::uint64_t packet_id, double /*now*/,
                                RoutingObservation& obs) {
  auto it = entries_.find(packet_id);
  if (it == entries_.end()) return false;  // already overheard
  entries_.erase(it);
  ++obs.pd;
  return true;
}

double trust_routing(const RoutingObservation& obs) {
  const double total = static_cast<double>(obs.pf) + static_cast<double>(obs.pd);
  if (total == 0.0) return 0.5;
  return static_cast<double>(obs.pf) / total * obs.pm;
}

}  // namespace vrt
