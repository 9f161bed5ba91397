#ifndef VRT_MOBILITY_H
#define VRT_MOBILITY_H

#include <cstdint>
#include <vector>

#include "vrt/geometry.h"
#include "vrt/rng.h"

namespace vrt {

// Manhattan road grid: axis-aligned segments joining a side x side lattice
// of intersections with the given spacing, offset by `origin` in both axes.
struct RoadGrid {
  std::uint32_t side = 0;
  double spacing = 0.0;
  double origin = 0.0;

  double coord(std::uint32_t i) const { return origin + spacing * i; }
  double extent() const { return spacing * (side - 1); }
  double total_road_m() const {
    return 2.0 * side * (side - 1) * spacing;
  }
  // Length of grid road inside a disc of `radius` around `center`,
  // computed by segment-circle intersection.
  double road_m_within(const Position& center, double radius) const;
};

struct VehicleState {
  Position pos;
  double vx = 0.0;
  double vy = 0.0;
  // Target intersection the vehicle is driving toward.
  std::uint32_t tx = 0;
  std::uint32_t ty = 0;

  double speed() const { return std::hypot(vx, vy); }
};

// Constant-speed random-turn mobility on the road grid. Vehicles travel
// segment to segment, turning uniformly at random at intersections
// (no U-turn unless at a dead end).
class MobilityModel {
 public:
  MobilityModel(const RoadGrid& grid, double speed, std::uint32_t n_vehicles,
                Rng& rng);

  void tick(double dt, Rng& rng);

  const std::vector<VehicleState>& vehicles() const { return vehicles_; }
  const RoadGrid& grid() const { return grid_; }

 private:
  void choose_next_target(VehicleState& v, Rng& rng);

  RoadGrid grid_;
  double speed_;
  std::vector<VehicleState> vehicles_;
};

}  // namespace vrt

#endif
