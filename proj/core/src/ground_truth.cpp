#include "vrt/ground_truth.h"

namespace vrt {

TrafficEstimate GroundTruth::traffic_around(
    const Position& center, double radius, double road_km_in_radius,
    std::span<const VehicleSnapshot> vehicles) {
  TrafficEstimate est;
  double speed_sum = 0.0;
  for (const auto& v : vehicles) {
    if (distance(center, v.pos) <= radius) {
      speed_sum += v.speed;
      ++est.samples;
    }
  }
  if (est.samples > 0) speed_sum /= est.samples;
  est.speed = speed_sum;
  if (road_km_in_radius > 0.0)
    est.density = static_cast<double>(est.samples) / road_km_in_radius;
  return est;
}

}  // namespace vrt
