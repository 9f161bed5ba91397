#ifndef VRT_CONFIG_H
#define VRT_CONFIG_H

#include <cstdint>
#include <string>
#include <vector>

#include "vrt/adversary.h"

namespace vrt {

enum class RoutingProtocol : std::uint8_t {
  Reactive,      // on-demand discovery
  ProactiveLS,   // periodic link-state
  ProactiveDV,   // periodic distance-vector
};

std::string to_string(RoutingProtocol p);

struct ScenarioConfig {
  // [scenario]
  double area_side = 14000.0;       // m
  std::uint32_t n_rsus = 25;
  double rsu_spacing = 900.0;       // m
  double rsu_range = 900.0;         // m
  std::uint32_t n_vehicles = 500;
  double vehicle_range = 250.0;     // m
  double vehicle_speed = 20.0;      // m/s
  double sim_duration = 1200.0;     // s
  double window = 60.0;             // observation window T, s
  std::uint32_t z_slots = 5;        // beacon-rate history depth
  double beacon_period = 1.0;       // s, RSUs and vehicles
  std::uint64_t seed = 1;
  std::uint32_t iterations = 10;

  // [thresholds]
  double t_h1 = 0.10;   // speed/density relative tolerance
  double t_h2 = 0.10;   // sensor relative tolerance
  double t_h3 = 2.0;    // s, alert-to-beacon window
  double t_h = 5.0;     // s, alert-to-alert window

  // [adversary]
  AdversaryProfile adversary;

  // [routing]
  RoutingProtocol protocol = RoutingProtocol::Reactive;
  bool trust_filter = false;
  std::uint32_t n_vehicle_sources = 50;
  double pkt_rate = 2.0;            // packets per second per source
  std::uint32_t pkt_size = 512;     // bytes
  std::uint32_t retry_limit = 2;
  std::uint32_t max_hops = 6;
  double route_update_period = 5.0; // s, proactive protocols

  // [events]
  double event_period = 120.0;      // s between ground-truth events
  double sensing_radius = 100.0;    // m, vehicle event sensing
  double sensor_jitter = 0.02;      // relative honest-sensor noise

  // [engine]
  double tx_rate = 6e6;             // bit/s
  double v_prop = 3e8;              // m/s
  double t_other = 1e-3;            // s, queuing/processing allowance
  bool normalize_bavg = false;
  double default_window = 60.0;     // normalization base for the weight cut

  double t_n() const { return window / default_window; }
};

struct ConfigError {
  std::string message;
};

// Parses the plain-text "[section]\nkey = value" format. Unknown keys,
// type errors and range violations are all collected before failing.
// Throws std::runtime_error with the full diagnostic list.
ScenarioConfig parse_config(const std::string& text);

// Validation used by both parse_config and the CLI `validate` verb.
// Returns the full list of violations; empty means valid.
std::vector<ConfigError> validate_config(const ScenarioConfig& cfg);

// Serializes so that parse_config(emit_config(cfg)) round-trips.
std::string emit_config(const ScenarioConfig& cfg);

// The in-repo desk-scale preset: 3x3 RSUs, 120 vehicles, 10 sim-minutes.
ScenarioConfig desk_scale_config();

}  // namespace vrt

#endif
