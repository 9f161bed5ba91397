#include "vrt/config.h"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace vrt {

std::string to_string(RoutingProtocol p) {
  switch (p) {
    case RoutingProtocol::Reactive: return "reactive";
    case RoutingProtocol::ProactiveLS: return "proactive_ls";
    case RoutingProtocol::ProactiveDV: return "proactive_dv";
  }
  return "reactive";
}

namespace {

struct Field {
  std::function<bool(ScenarioConfig&, const std::string&)> set;  // false on type error
  std::function<std::string(const ScenarioConfig&)> get;
};

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
  if (s.empty() || s[0] == '-') return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

bool parse_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "on" || s == "1") { out = true; return true; }
  if (s == "false" || s == "off" || s == "0") { out = false; return true; }
  return false;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

#define F_DOUBLE(expr)                                                   \
  Field{[](ScenarioConfig& c, const std::string& s) {                    \
          double v;                                                      \
          if (!parse_double(s, v)) return false;                         \
          c.expr = v;                                                    \
          return true;                                                   \
        },                                                               \
        [](const ScenarioConfig& c) { return fmt(c.expr); }}

#define F_U32(expr)                                                      \
  Field{[](ScenarioConfig& c, const std::string& s) {                    \
          std::uint64_t v;                                               \
          if (!parse_u64(s, v) || v > 0xffffffffULL) return false;       \
          c.expr = static_cast<std::uint32_t>(v);                        \
          return true;                                                   \
        },                                                               \
        [](const ScenarioConfig& c) { return std::to_string(c.expr); }}

#define F_U64(expr)                                                      \
  Field{[](ScenarioConfig& c, const std::string& s) {                    \
          std::uint64_t v;                                               \
          if (!parse_u64(s, v)) return false;                            \
          c.expr = v;                                                    \
          return true;                                                   \
        },                                                               \
        [](const ScenarioConfig& c) { return std::to_string(c.expr); }}

#define F_BOOL(expr)                                                     \
  Field{[](ScenarioConfig& c, const std::string& s) {                    \
          bool v;                                                        \
          if (!parse_bool(s, v)) return false;                           \
          c.expr = v;                                                    \
          return true;                                                   \
        },                                                               \
        [](const ScenarioConfig& c) {                                    \
          return std::string(c.expr ? "true" : "false");                 \
        }}

const std::map<std::string, Field>& field_table() {
  static const std::map<std::string, Field> table = {
      {"scenario.area_side", F_DOUBLE(area_side)},
      {"scenario.n_rsus", F_U32(n_rsus)},
      {"scenario.rsu_spacing", F_DOUBLE(rsu_spacing)},
      {"scenario.rsu_range", F_DOUBLE(rsu_range)},
      {"scenario.n_vehicles", F_U32(n_vehicles)},
      {"scenario.vehicle_range", F_DOUBLE(vehicle_range)},
      {"scenario.vehicle_speed", F_DOUBLE(vehicle_speed)},
      {"scenario.sim_duration", F_DOUBLE(sim_duration)},
      {"scenario.window", F_DOUBLE(window)},
      {"scenario.z_slots", F_U32(z_slots)},
      {"scenario.beacon_period", F_DOUBLE(beacon_period)},
      {"scenario.seed", F_U64(seed)},
      {"scenario.iterations", F_U32(iterations)},
      {"thresholds.t_h1", F_DOUBLE(t_h1)},
      {"thresholds.t_h2", F_DOUBLE(t_h2)},
      {"thresholds.t_h3", F_DOUBLE(t_h3)},
      {"thresholds.t_h", F_DOUBLE(t_h)},
      {"adversary.mr", F_DOUBLE(adversary.mr)},
      {"adversary.mv", F_DOUBLE(adversary.mv)},
      {"adversary.rsu_drop_p", F_DOUBLE(adversary.rsu_drop_p)},
      {"adversary.rsu_modify_p", F_DOUBLE(adversary.rsu_modify_p)},
      {"adversary.rsu_flood_p", F_DOUBLE(adversary.rsu_flood_p)},
      {"adversary.rsu_beacon_falsify_p", F_DOUBLE(adversary.rsu_beacon_falsify_p)},
      {"adversary.rsu_alert_alter_p", F_DOUBLE(adversary.rsu_alert_alter_p)},
      {"adversary.veh_false_ignore_p", F_DOUBLE(adversary.veh_false_ignore_p)},
      {"adversary.veh_suppress_or_flip_p", F_DOUBLE(adversary.veh_suppress_or_flip_p)},
      {"adversary.veh_alert_modify_p", F_DOUBLE(adversary.veh_alert_modify_p)},
      {"adversary.flood_burst_factor", F_DOUBLE(adversary.flood_burst_factor)},
      {"adversary.falsify_factor", F_DOUBLE(adversary.falsify_factor)},
      {"routing.protocol",
       Field{[](ScenarioConfig& c, const std::string& s) {
               if (s == "reactive") c.protocol = RoutingProtocol::Reactive;
               else if (s == "proactive_ls") c.protocol = RoutingProtocol::ProactiveLS;
               else if (s == "proactive_dv") c.protocol = RoutingProtocol::ProactiveDV;
               else return false;
               return true;
             },
             [](const ScenarioConfig& c) { return to_string(c.protocol); }}},
      {"routing.trust_filter", F_BOOL(trust_filter)},
      {"routing.n_vehicle_sources", F_U32(n_vehicle_sources)},
      {"routing.pkt_rate", F_DOUBLE(pkt_rate)},
      {"routing.pkt_size", F_U32(pkt_size)},
      {"routing.retry_limit", F_U32(retry_limit)},
      {"routing.max_hops", F_U32(max_hops)},
      {"routing.route_update_period", F_DOUBLE(route_update_period)},
      {"events.event_period", F_DOUBLE(event_period)},
      {"events.sensing_radius", F_DOUBLE(sensing_radius)},
      {"events.sensor_jitter", F_DOUBLE(sensor_jitter)},
      {"engine.tx_rate", F_DOUBLE(tx_rate)},
      {"engine.v_prop", F_DOUBLE(v_prop)},
      {"engine.t_other", F_DOUBLE(t_other)},
      {"engine.normalize_bavg", F_BOOL(normalize_bavg)},
      {"engine.default_window", F_DOUBLE(default_window)},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void check_prob(std::vector<ConfigError>& errs, double v, const char* name) {
  if (v < 0.0 || v > 1.0)
    errs.push_back({std::string(name) + " must be in [0, 1], got " + fmt(v)});
}

void check_pos(std::vector<ConfigError>& errs, double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    errs.push_back({std::string(name) + " must be > 0, got " + fmt(v)});
}

}  // namespace

std::vector<ConfigError> validate_config(const ScenarioConfig& c) {
  std::vector<ConfigError> errs;
  check_pos(errs, c.area_side, "scenario.area_side");
  if (c.n_rsus == 0) errs.push_back({"scenario.n_rsus must be >= 1"});
  check_pos(errs, c.rsu_spacing, "scenario.rsu_spacing");
  check_pos(errs, c.rsu_range, "scenario.rsu_range");
  if (c.n_vehicles == 0) errs.push_back({"scenario.n_vehicles must be >= 1"});
  check_pos(errs, c.vehicle_range, "scenario.vehicle_range");
  check_pos(errs, c.vehicle_speed, "scenario.vehicle_speed");
  if (c.sim_duration < 0.0)
    errs.push_back({"scenario.sim_duration must be >= 0"});
  check_pos(errs, c.window, "scenario.window");
  if (c.z_slots == 0) errs.push_back({"scenario.z_slots must be >= 1"});
  check_pos(errs, c.beacon_period, "scenario.beacon_period");
  if (c.iterations == 0) errs.push_back({"scenario.iterations must be >= 1"});
  check_pos(errs, c.t_h1, "thresholds.t_h1");
  check_pos(errs, c.t_h2, "thresholds.t_h2");
  check_pos(errs, c.t_h3, "thresholds.t_h3");
  check_pos(errs, c.t_h, "thresholds.t_h");
  check_prob(errs, c.adversary.mr, "adversary.mr");
  check_prob(errs, c.adversary.mv, "adversary.mv");
  check_prob(errs, c.adversary.rsu_drop_p, "adversary.rsu_drop_p");
  check_prob(errs, c.adversary.rsu_modify_p, "adversary.rsu_modify_p");
  check_prob(errs, c.adversary.rsu_flood_p, "adversary.rsu_flood_p");
  check_prob(errs, c.adversary.rsu_beacon_falsify_p, "adversary.rsu_beacon_falsify_p");
  check_prob(errs, c.adversary.rsu_alert_alter_p, "adversary.rsu_alert_alter_p");
  check_prob(errs, c.adversary.veh_false_ignore_p, "adversary.veh_false_ignore_p");
  check_prob(errs, c.adversary.veh_suppress_or_flip_p, "adversary.veh_suppress_or_flip_p");
  check_prob(errs, c.adversary.veh_alert_modify_p, "adversary.veh_alert_modify_p");
  check_pos(errs, c.pkt_rate, "routing.pkt_rate");
  if (c.pkt_size == 0) errs.push_back({"routing.pkt_size must be >= 1"});
  if (c.max_hops == 0) errs.push_back({"routing.max_hops must be >= 1"});
  check_pos(errs, c.route_update_period, "routing.route_update_period");
  check_pos(errs, c.event_period, "events.event_period");
  check_pos(errs, c.sensing_radius, "events.sensing_radius");
  if (c.sensor_jitter < 0.0)
    errs.push_back({"events.sensor_jitter must be >= 0"});
  check_pos(errs, c.tx_rate, "engine.tx_rate");
  check_pos(errs, c.v_prop, "engine.v_prop");
  if (c.t_other < 0.0) errs.push_back({"engine.t_other must be >= 0"});
  check_pos(errs, c.default_window, "engine.default_window");
  const auto side = static_cast<std::uint32_t>(
      std::ceil(std::sqrt(static_cast<double>(c.n_rsus))));
  if (side > 1 && c.rsu_spacing * (side - 1) > c.area_side)
    errs.push_back({"RSU grid does not fit inside scenario.area_side"});
  return errs;
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::vector<ConfigError> errs;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errs.push_back({"line " + std::to_string(lineno) + ": malformed section header"});
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errs.push_back({"line " + std::to_string(lineno) + ": expected key = value"});
      continue;
    }
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto it = field_table().find(key);
    if (it == field_table().end()) {
      errs.push_back({"line " + std::to_string(lineno) + ": unknown key '" + key + "'"});
      continue;
    }
    if (!it->second.set(cfg, value))
      errs.push_back({"line " + std::to_string(lineno) + ": bad value '" + value +
                      "' for '" + key + "'"});
  }
  for (const auto& e : validate_config(cfg)) errs.push_back(e);
  if (!errs.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errs) msg += "\n  - " + e.message;
    throw std::runtime_error(msg);
  }
  return cfg;
}

std::string emit_config(const ScenarioConfig& cfg) {
  std::string out;
  std::string current;
  for (const auto& [key, field] : field_table()) {
    const auto dot = key.find('.');
    const std::string section = key.substr(0, dot);
    if (section != current) {
      if (!out.empty()) out += "\n";
      out += "[" + section + "]\n";
      current = section;
    }
    out += key.substr(dot + 1) + " = " + field.get(cfg) + "\n";
  }
  return out;
}

ScenarioConfig desk_scale_config() {
  ScenarioConfig c;
  c.area_side = 3600.0;
  c.n_rsus = 9;
  c.n_vehicles = 120;
  c.sim_duration = 600.0;
  c.n_vehicle_sources = 20;
  return c;
}

}  // namespace vrt
