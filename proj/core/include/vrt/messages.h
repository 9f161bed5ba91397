#ifndef VRT_MESSAGES_H
#define VRT_MESSAGES_H

#include <cstdint>
#include <string>
#include <vector>

#include "vrt/geometry.h"

namespace vrt {

// Periodic hello / basic safety message.
struct Beacon {
  NodeId sender;
  Position position;
  double timestamp = 0.0;    // sim seconds
  double speed_avg = 0.0;    // m/s
  double density = 0.0;      // vehicles per km of road
  double temperature = 0.0;  // degC
  double humidity = 0.0;     // percent
  double carbon_level = 0.0; // ppm
  std::uint64_t seq = 0;     // per-sender beacon counter
};

enum class EventType : std::uint8_t {
  ACCIDENT = 0,
  BAD_ROAD = 1,
  IGNORE_RSU = 2,
};

struct TrafficAlert {
  NodeId sender_id;
  Position position;       // sender position at creation
  double timestamp = 0.0;
  EventType event_type = EventType::ACCIDENT;
  int event_value = 1;     // 1 = event present / RSU honest, 0 = absent / RSU malicious
  Position location;       // event place (for IGNORE_RSU: the RSU position)
  std::uint64_t event_key = 0;  // ground-truth event id, or beacon seq for IGNORE_RSU
};

struct DataPacket {
  std::uint64_t id = 0;
  NodeId source;
  NodeId destination;
  std::vector<std::uint8_t> immutable_payload;
  std::vector<std::uint8_t> mutable_header;
  int hop_count = 0;
  double created_at = 0.0;
};

struct QTableEntryMsg {
  std::uint32_t subject = 0;  // RSU index
  double q = 0.0;
  bool one_hop = false;
};

struct QTableBroadcast {
  NodeId owner;
  double timestamp = 0.0;
  int ttl = 0;  // remaining rebroadcasts
  std::vector<QTableEntryMsg> entries;
};

}  // namespace vrt

#endif
