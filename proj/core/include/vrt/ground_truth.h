#ifndef VRT_GROUND_TRUTH_H
#define VRT_GROUND_TRUTH_H

#include <cstdint>
#include <span>
#include <vector>

#include "vrt/geometry.h"
#include "vrt/messages.h"

namespace vrt {

struct Environment {
  double temperature = 25.0;   // degC
  double humidity = 60.0;      // percent
  double carbon_level = 400.0; // ppm
};

struct GroundTruthEvent {
  std::uint64_t id = 0;
  EventType type = EventType::ACCIDENT;
  Position location;
  double start_time = 0.0;
};

struct TrafficEstimate {
  double speed = 0.0;    // mean m/s over sampled vehicles
  double density = 0.0;  // vehicles per km of road
  std::uint32_t samples = 0;
};

struct VehicleSnapshot {
  Position pos;
  double speed = 0.0;
};

// Single authoritative copy of the simulated world state that honest
// sensing reads and adversarial distortion deviates from.
class GroundTruth {
 public:
  explicit GroundTruth(Environment env) : env_(env) {}

  // Environment is spatially uniform; per-position query kept so a
  // gradient field can be slotted in without touching callers.
  const Environment& environment_at(const Position&) const { return env_; }

  void add_event(GroundTruthEvent ev) { events_.push_back(ev); }
  const std::vector<GroundTruthEvent>& events() const { return events_; }

  // True traffic state around `center`: mean vehicle speed and vehicles
  // per km of road, over vehicles within `radius`.
  static TrafficEstimate traffic_around(const Position& center, double radius,
                                        double road_km_in_radius,
                                        std::span<const VehicleSnapshot> vehicles);

 private:
  Environment env_;
  std::vector<GroundTruthEvent> events_;
};

}  // namespace vrt

#endif
