#ifndef VRT_GEOMETRY_H
#define VRT_GEOMETRY_H

#include <cmath>
#include <cstdint>
#include <compare>
#include <vector>

namespace vrt {

// Planar position in meters.
struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position& a, const Position& b) {
    return a.x == b.x && a.y == b.y;
  }
};

inline double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

enum class NodeKind : std::uint8_t { RSU = 0, VEHICLE = 1 };

struct NodeId {
  NodeKind kind = NodeKind::RSU;
  std::uint32_t index = 0;

  friend bool operator==(const NodeId&, const NodeId&) = default;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

inline NodeId rsu_id(std::uint32_t i) { return {NodeKind::RSU, i}; }
inline NodeId vehicle_id(std::uint32_t i) { return {NodeKind::VEHICLE, i}; }

// True iff the Euclidean distance between a and b is at most range.
bool in_range(const Position& a, const Position& b, double range);

struct TopologyEntry {
  NodeId id;
  Position pos;
};

// All other nodes of the requested kind within range of `node`.
// Throws std::invalid_argument if `node` is not present in the topology.
std::vector<NodeId> one_hop_neighbors(NodeId node,
                                      const std::vector<TopologyEntry>& topology,
                                      double range,
                                      NodeKind kind);

// Positions of a regular RSU grid of n nodes (side = ceil(sqrt(n))),
// centered inside [0, area_side]^2.
std::vector<Position> rsu_grid_positions(std::uint32_t n_rsus, double spacing,
                                         double area_side);

}  // namespace vrt

#endif
