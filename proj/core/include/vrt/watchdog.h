#ifndef VRT_WATCHDOG_H
#define VRT_WATCHDOG_H

#include <cstdint>
#include <map>
#include <unordered_map>

#include "vrt/digest.h"
#include "vrt/geometry.h"
#include "vrt/messages.h"

namespace vrt {

// Per-window forwarding observation of one next-hop RSU.
struct RoutingObservation {
  std::uint32_t pf = 0;  // packets forwarded
  std::uint32_t pd = 0;  // packets dropped
  int pm = 1;            // packet modification latch: 0 once a modification is seen
  std::uint32_t window_id = 0;

  void reset(std::uint32_t window) {
    pf = 0;
    pd = 0;
    pm = 1;
    window_id = window;
  }
};

// Expected time for the next hop to forward a packet: transmission +
// propagation + queuing/processing allowance.
// L in bits, rate in bit/s, d in meters, v_prop in m/s, t_other in seconds.
double expected_forward_time(double length_bits, double rate, double d,
                             double v_prop, double t_other);

// Buffer of recently sent packets one RSU keeps while it waits to overhear
// its next hop forwarding them. Each entry leaves the buffer exactly once:
// on overhear or on deadline expiry.
class WatchdogBuffer {
 public:
  struct Entry {
    std::uint64_t digest = 0;
    double sent_at = 0.0;
    NodeId next_hop;
    double deadline = 0.0;
  };

  // Throws std::invalid_argument on duplicate packet id.
  void on_forward_to_next_hop(const DataPacket& packet, NodeId next_hop,
                              double now, double t_expected);

  // Matches the overheard packet against the stored entry. Returns true if
  // the entry was consumed. PF/PM bookkeeping is applied to `obs`.
  bool on_overhear(const DataPacket& packet, NodeId forwarder, double now,
                   RoutingObservation& obs);

  // Deadline expiry; counts a drop iff the entry is still present.
  // Returns true if a drop was recorded.
  bool on_timeout(std::uint64_t packet_id, double now, RoutingObservation& obs);

  // Removes an entry without touching the counters. Used when the next hop
  // visibly disposed of the packet for a non-adversarial reason (delivered
  // to itself, route error, hop budget).
  void cancel(std::uint64_t packet_id) { entries_.erase(packet_id); }

  bool contains(std::uint64_t packet_id) const {
    return entries_.count(packet_id) != 0;
  }
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::uint64_t, Entry> entries_;
};

// Forward ratio PF/(PF+PD) scaled by the modification latch PM.
// A window with no observations is neutral 0.5.
double trust_routing(const RoutingObservation& obs);

}  // namespace vrt

#endif
