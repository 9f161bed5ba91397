#ifndef VRT_EVENT_QUEUE_H
#define VRT_EVENT_QUEUE_H

#include <cstdint>
#include <memory>
#include <queue>
#include <variant>
#include <vector>

#include "vrt/messages.h"

namespace vrt {

enum class EventAction : std::uint8_t {
  Deliver,
  BeaconTick,
  ObservationWindowEnd,
  MobilityTick,
  TrafficEventStart,
  PacketInject,
  WatchdogTimeout,
  RoutingTick,
  AlertRelay,
};

using MessagePayload =
    std::variant<std::monostate, Beacon, TrafficAlert,
                 std::shared_ptr<const DataPacket>,
                 std::shared_ptr<const QTableBroadcast>>;

struct Event {
  double fire_time = 0.0;
  std::uint64_t sequence = 0;  // tiebreaker, assigned by the queue
  EventAction action = EventAction::MobilityTick;
  NodeId target;       // receiving / acting node
  NodeId actor;        // sender / observer, when relevant
  std::uint64_t key = 0;  // packet id, event id, ...
  MessagePayload payload;
};

// Min-queue ordered by (fire_time, sequence); sequence is a monotone
// insertion counter so same-time events pop FIFO.
class EventQueue {
 public:
  // Throws std::invalid_argument for past-dated events.
  void schedule(Event ev);

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  double clock() const { return clock_; }

  // Pops the next event and advances the clock to its fire time.
  Event pop();

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
      return a.sequence > b.sequence;
    }
  };

  double clock_ = 0.0;
  std::uint64_t next_sequence_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
};

}  // namespace vrt

#endif
