#include "vrt/mobility.h"

#include <algorithm>
#include <cmath>

namespace vrt {

namespace {

double chord_overlap(double a0, double a1, double axis_coord, double cx,
                     double cy, double r, bool horizontal) {
  const double off = horizontal ? (axis_coord - cy) : (axis_coord - cx);
  if (std::abs(off) >= r) return 0.0;
  const double half = std::sqrt(r * r - off * off);
  const double c = horizontal ? cx : cy;
  const double lo = std::max(a0, c - half);
  const double hi = std::min(a1, c + half);
  return std::max(0.0, hi - lo);
}

}  // namespace

double RoadGrid::road_m_within(const Position& center, double radius) const {
  double total = 0.0;
  const double lo = origin;
  const double hi = origin + extent();
  for (std::uint32_t i = 0; i < side; ++i) {
    const double c = coord(i);
    total += chord_overlap(lo, hi, c, center.x, center.y, radius, true);   // row
    total += chord_overlap(lo, hi, c, center.x, center.y, radius, false);  // column
  }
  return total;
}

MobilityModel::MobilityModel(const RoadGrid& grid, double speed,
                             std::uint32_t n_vehicles, Rng& rng)
    : grid_(grid), speed_(speed) {
  vehicles_.resize(n_vehicles);
  for (auto& v : vehicles_) {
    const bool horizontal = rng.bernoulli(0.5);
    const auto row = static_cast<std::uint32_t>(rng.below(grid_.side));
    const auto seg = static_cast<std::uint32_t>(rng.below(grid_.side - 1));
    const double offset = rng.uniform(0.0, grid_.spacing);
    const bool forward = rng.bernoulli(0.5);
    if (horizontal) {
      v.pos = {grid_.coord(seg) + offset, grid_.coord(row)};
      v.tx = forward ? seg + 1 : seg;
      v.ty = row;
      v.vx = forward ? speed_ : -speed_;
      v.vy = 0.0;
    } else {
      v.pos = {grid_.coord(row), grid_.coord(seg) + offset};
      v.tx = row;
      v.ty = forward ? seg + 1 : seg;
      v.vx = 0.0;
      v.vy = forward ? speed_ : -speed_;
    }
  }
}

void MobilityModel::choose_next_target(VehicleState& v, Rng& rng) {
  // v sits exactly on intersection (tx, ty); pick an outgoing direction.
  struct Dir {
    int dx, dy;
  };
  const Dir dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  // Direction we arrived from (to exclude the U-turn).
  const int back_dx = v.vx > 0 ? -1 : (v.vx < 0 ? 1 : 0);
  const int back_dy = v.vy > 0 ? -1 : (v.vy < 0 ? 1 : 0);

  Dir options[4];
  int n = 0;
  for (const auto& d : dirs) {
    const int nx = static_cast<int>(v.tx) + d.dx;
    const int ny = static_cast<int>(v.ty) + d.dy;
    if (nx < 0 || ny < 0 || nx >= static_cast<int>(grid_.side) ||
        ny >= static_cast<int>(grid_.side))
      continue;
    if (d.dx == back_dx && d.dy == back_dy) continue;
    options[n++] = d;
  }
  Dir pick{back_dx, back_dy};  // dead end: turn around
  if (n > 0) pick = options[rng.below(static_cast<std::uint64_t>(n))];
  v.tx = static_cast<std::uint32_t>(static_cast<int>(v.tx) + pick.dx);
  v.ty = static_cast<std::uint32_t>(static_cast<int>(v.ty) + pick.dy);
  v.vx = speed_ * pick.dx;
  v.vy = speed_ * pick.dy;
}

void MobilityModel::tick(double dt, Rng& rng) {
  for (auto& v : vehicles_) {
    double remaining = speed_ * dt;
    // A vehicle can cross several intersections in one tick when dt is large.
    while (remaining > 0.0) {
      const Position target{grid_.coord(v.tx), grid_.coord(v.ty)};
      const double d = distance(v.pos, target);
      if (remaining < d) {
        v.pos.x += v.vx / speed_ * remaining;
        v.pos.y += v.vy / speed_ * remaining;
        break;
      }
      v.pos = target;
      remaining -= d;
      choose_next_target(v, rng);
    }
  }
}

}  // namespace vrt
