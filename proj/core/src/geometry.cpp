#include "vrt/geometry.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vrt {

bool in_range(const Position& a, const Position& b, double range) {
  if (range <= 0.0) throw std::invalid_argument("in_range: range must be > 0");
  return distance(a, b) <= range;
}

std::vector<NodeId> one_hop_neighbors(NodeId node,
                                      const std::vector<TopologyEntry>& topology,
                                      double range, NodeKind kind) {
  const TopologyEntry* self = nullptr;
  for (const auto& e : topology) {
    if (e.id == node) {
      self = &e;
      break;
    }
  }
  if (!self) throw std::invalid_argument("one_hop_neighbors: unknown node id");

  std::vector<NodeId> out;
  for (const auto& e : topology) {
    if (e.id == node || e.id.kind != kind) continue;
    if (in_range(self->pos, e.pos, range)) out.push_back(e.id);
  }
  return out;
}

std::vector<Position> rsu_grid_positions(std::uint32_t n_rsus, double spacing,
                                         double area_side) {
  auto side = static_cast<std::uint32_t>(
      std::ceil(std::sqrt(static_cast<double>(n_rsus))));
  if (side == 0) return {};
  const double extent = spacing * static_cast<double>(side - 1);
  const double origin = std::max(0.0, (area_side - extent) / 2.0);
  std::vector<Position> out;
  out.reserve(n_rsus);
  for (std::uint32_t i = 0; i < n_rsus; ++i) {
    const std::uint32_t row = i / side;
    const std::uint32_t col = i % side;
    out.push_back({origin + spacing * col, origin + spacing * row});
  }
  return out;
}

}  // namespace vrt
