#include "vrt/simulation.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <limits>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace vrt {

double propagation_and_tx_delay(double bits, double dist, double tx_rate,
                                double v_prop) {
  return bits / tx_rate + dist / v_prop;
}

namespace {

// Control-plane message size (beacons, alerts, table broadcasts).
constexpr double kCtrlBits = 256.0 * 8.0;
// Hops an IGNORE_RSU alert may still travel vehicle-to-vehicle.
constexpr int kIgnoreAlertTtl = 3;
// RSU sensing latency before it emits its own event alert.
constexpr double kRsuAlertDelay = 0.2;
// How long a relaying vehicle collects event-alert copies before the
// plurality decision.
constexpr double kRelayCollectDelay = 0.3;
// Reactive routing caches the destination vehicle's serving RSU this long.
constexpr double kLocationCacheTtl = 30.0;
// Gossiped Q entries older than this many windows are ignored.
constexpr std::uint32_t kGossipFreshWindows = 3;
// Beacons a vehicle keeps per RSU for relay re-verification.
constexpr std::size_t kBeaconCacheDepth = 4;

// Small phase offsets so the recurring ticks at the same integer second
// always pop in the same order: mobility, routing, beacons.
constexpr double kRoutingPhase = 1e-4;
constexpr double kBeaconPhase = 5e-4;
constexpr double kEventPhase = 0.5;

std::uint64_t beacon_key(std::uint32_t rsu, std::uint64_t seq) {
  return (static_cast<std::uint64_t>(rsu) << 40) ^ seq;
}

struct BeaconSlot {
  double ts = 0.0;
  double speed = 0.0;
  double density = 0.0;
  std::uint32_t invalid = 0;
  std::uint32_t total = 0;
  std::set<std::uint32_t> voters;
};

struct ObsState {
  RoutingObservation routing;
  std::uint32_t forwards = 0;          // data packets handed to the subject
  BeaconRateHistory hist{5};
  std::uint32_t beacon_count = 0;
  std::map<std::uint64_t, BeaconSlot> slots;  // by beacon seq
};

struct GossipEntry {
  double q = 0.0;
  std::uint32_t window = 0;
};

struct Pending {
  std::shared_ptr<const DataPacket> pkt;
  std::uint32_t next = 0;       // next-hop RSU index
  std::uint32_t attempts = 1;
  std::uint32_t tx_serial = 0;  // matches the live watchdog timeout event
};

struct RsuState {
  Position pos;
  bool malicious = false;
  std::vector<std::uint32_t> nbrs;
  double disc_road_km = 0.0;
  std::uint64_t beacon_seq = 0;
  std::uint32_t adjacent_count = 0;

  // Ground-truth accumulators about this RSU's own coverage disc, shared
  // by every observer (the window-long vehicle-beacon sample).
  double est_speed_sum = 0.0;
  double est_count_sum = 0.0;
  std::uint64_t est_n = 0;
  std::uint32_t est_ticks = 0;

  std::map<std::uint32_t, ObsState> obs;  // one-hop subjects
  WatchdogBuffer wb;
  std::unordered_map<std::uint64_t, Pending> pending;

  // Event alerts collected this window.
  std::map<std::pair<std::uint32_t, std::uint64_t>, TrafficAlert> rsu_alerts;
  std::map<std::uint64_t, std::map<std::uint32_t, TrafficAlert>> veh_alerts;

  TrustLedger ledger;
  QTable qtable;
  std::map<std::uint32_t, std::map<std::uint32_t, GossipEntry>> gossip;
  std::set<std::pair<std::uint32_t, std::uint32_t>> gossip_seen;  // owner, window
};

struct VehState {
  bool malicious = false;
  std::map<std::uint32_t, std::deque<Beacon>> recent;  // per RSU
  std::unordered_set<std::uint64_t> ignore_marks;      // handled (rsu, seq)
  std::set<std::uint32_t> ignored_rsus;  // own sensor evidence of falsified beacons
  std::map<std::uint64_t, std::vector<int>> event_values;
  std::set<std::uint64_t> event_relay_done;
  std::set<std::uint64_t> event_relay_scheduled;
};

struct PacketInfo {
  std::uint64_t digest = 0;
  bool closed = false;
};

enum class Terminal { Delivered, Malice, NoRoute, HopLimit };

// Uniform-bucket index over vehicle positions, rebuilt every mobility tick.
class SpatialGrid {
 public:
  void init(double extent, double cell) {
    cell_ = cell;
    side_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(extent / cell) + 2);
    buckets_.assign(static_cast<std::size_t>(side_ * side_), {});
  }

  void rebuild(const std::vector<VehicleState>& vehicles, double origin) {
    origin_ = origin;
    for (auto& b : buckets_) b.clear();
    for (std::uint32_t i = 0; i < vehicles.size(); ++i)
      buckets_[index(vehicles[i].pos)].push_back(i);
  }

  template <typename Fn>
  void for_each_within(const Position& center, double radius,
                       const std::vector<VehicleState>& vehicles, Fn&& fn) const {
    const std::int64_t lo_x = clamp_cell((center.x - origin_ - radius) / cell_);
    const std::int64_t hi_x = clamp_cell((center.x - origin_ + radius) / cell_);
    const std::int64_t lo_y = clamp_cell((center.y - origin_ - radius) / cell_);
    const std::int64_t hi_y = clamp_cell((center.y - origin_ + radius) / cell_);
    for (std::int64_t cy = lo_y; cy <= hi_y; ++cy)
      for (std::int64_t cx = lo_x; cx <= hi_x; ++cx)
        for (std::uint32_t i : buckets_[static_cast<std::size_t>(cy * side_ + cx)])
          if (distance(vehicles[i].pos, center) <= radius) fn(i);
  }

 private:
  std::size_t index(const Position& p) const {
    return static_cast<std::size_t>(clamp_cell((p.y - origin_) / cell_) * side_ +
                                    clamp_cell((p.x - origin_) / cell_));
  }
  std::int64_t clamp_cell(double v) const {
    auto c = static_cast<std::int64_t>(std::floor(v));
    return std::clamp<std::int64_t>(c, 0, side_ - 1);
  }

  double cell_ = 1.0;
  double origin_ = 0.0;
  std::int64_t side_ = 1;
  std::vector<std::vector<std::uint32_t>> buckets_;
};

class Simulator {
 public:
  explicit Simulator(const ScenarioConfig& cfg)
      : cfg_(cfg),
        rng_mob_(cfg.seed, RngStream::Mobility),
        rng_adv_(cfg.seed, RngStream::Adversary),
        rng_traffic_(cfg.seed, RngStream::Traffic),
        rng_events_(cfg.seed, RngStream::Events),
        rng_sensors_(cfg.seed, RngStream::Sensors),
        rng_roles_(cfg.seed, RngStream::Roles),
        truth_(Environment{}) {}

  RunResult run();

 private:
  // ---- setup ----
  void build_world();
  void seed_events();

  // ---- event handlers ----
  void on_mobility_tick();
  void on_beacon_tick();
  void on_routing_tick();
  void on_traffic_event();
  void on_packet_inject(std::uint32_t source_slot);
  void on_window_end();
  void on_watchdog_timeout(std::uint32_t rsu, std::uint64_t pid);
  void on_alert_relay(const Event& ev);
  void on_deliver(const Event& ev);

  void rsu_on_beacon(std::uint32_t r1, const Beacon& b);
  void veh_on_beacon(std::uint32_t v, const Beacon& b, bool falsified);
  void rsu_on_alert(std::uint32_t r1, const TrafficAlert& a);
  void veh_on_alert(std::uint32_t v, const TrafficAlert& a, int ttl);
  void rsu_on_packet(std::uint32_t u, std::shared_ptr<const DataPacket> pkt,
                     NodeId prev);
  void veh_on_packet(std::uint32_t v, const std::shared_ptr<const DataPacket>& pkt);
  void rsu_on_gossip(std::uint32_t r1, const QTableBroadcast& bc);

  // ---- helpers ----
  double now() const { return queue_.clock(); }
  std::uint32_t window_index() const {
    return static_cast<std::uint32_t>(now() / cfg_.window);
  }
  Environment sensed_environment(const Position& p);
  TrafficEstimate truth_estimate(std::uint32_t rsu) const;
  std::uint32_t nearest_rsu(const Position& p) const;
  std::uint32_t covering_rsu(const Position& p, std::uint32_t viewer) const;
  bool excluded_by(std::uint32_t viewer, std::uint32_t subject) const;
  std::int32_t next_hop_toward(std::uint32_t u, std::uint32_t target);
  std::uint32_t serving_rsu_for_packet(std::uint32_t holder, std::uint32_t veh);
  void emit_rsu_beacons(std::uint32_t r);
  void broadcast_alert(const TrafficAlert& a, const Position& from,
                       bool to_vehicles, bool to_all_rsus_in_range,
                       int ttl, std::uint32_t skip_vehicle);
  void deliver_alert_to_rsus(const TrafficAlert& a, const Position& from);
  void handle_ignore_alert_at_vehicle(std::uint32_t v, const TrafficAlert& a,
                                      int ttl);
  void transmit_packet(std::uint32_t u, const std::shared_ptr<const DataPacket>& pkt,
                       std::uint32_t next);
  void notify_overhear(NodeId prev, const DataPacket& sent, std::uint32_t u);
  void notify_cancel(NodeId prev, std::uint64_t pid);
  void close_packet(std::uint64_t pid, Terminal t, bool intact = true,
                    double latency = 0.0);
  void window_trust_for(std::uint32_t r1);
  void schedule_gossip(std::uint32_t r1);
  double neighbor_average(const RsuState& r1, std::uint32_t subject,
                          std::uint32_t self, bool& found) const;
  void finalize(RunResult& out);

  ScenarioConfig cfg_;
  Rng rng_mob_, rng_adv_, rng_traffic_, rng_events_, rng_sensors_, rng_roles_;
  GroundTruth truth_;

  EventQueue queue_;
  std::unique_ptr<MobilityModel> mobility_;
  SpatialGrid vgrid_;
  std::vector<VehicleSnapshot> snapshot_;
  Backbone backbone_;
  std::unique_ptr<ReactiveRouting> reactive_;
  std::unique_ptr<LinkStateRouting> ls_;
  std::unique_ptr<DistanceVectorRouting> dv_;
  std::map<std::uint32_t, std::pair<std::uint32_t, double>> location_cache_;

  std::vector<RsuState> rsus_;
  std::vector<VehState> vehicles_;
  RoleMap roles_;

  std::unordered_map<std::uint64_t, PacketInfo> registry_;
  std::uint32_t tx_serial_ = 0;  // distinguishes forward attempts per packet
  std::uint64_t next_packet_id_ = 1;
  std::uint64_t next_event_id_ = 1;
  std::vector<NodeId> sources_;

  PacketStats packets_;
  NetworkCounters net_;
  std::uint64_t beacons_sent_ = 0;
  std::uint64_t alerts_sent_ = 0;
  std::uint64_t events_processed_ = 0;
  std::uint32_t windows_completed_ = 0;
  std::vector<TrustSample> series_;
};

// ---------------------------------------------------------------- setup

void Simulator::build_world() {
  const auto rsu_pos = rsu_grid_positions(cfg_.n_rsus, cfg_.rsu_spacing,
                                          cfg_.area_side);
  const auto side = static_cast<std::uint32_t>(
      std::ceil(std::sqrt(static_cast<double>(cfg_.n_rsus))));
  RoadGrid grid;
  grid.side = std::max<std::uint32_t>(side, 2);
  grid.spacing = cfg_.rsu_spacing;
  grid.origin = rsu_pos.front().x;

  roles_ = assign_roles(rng_roles_, cfg_.n_rsus, cfg_.n_vehicles,
                        cfg_.adversary.mr, cfg_.adversary.mv);

  rsus_.resize(cfg_.n_rsus);
  backbone_.adj.resize(cfg_.n_rsus);
  for (std::uint32_t i = 0; i < cfg_.n_rsus; ++i) {
    rsus_[i].pos = rsu_pos[i];
    rsus_[i].malicious = roles_.rsu_malicious[i];
    rsus_[i].disc_road_km = grid.road_m_within(rsu_pos[i], cfg_.rsu_range) / 1000.0;
  }
  for (std::uint32_t i = 0; i < cfg_.n_rsus; ++i)
    for (std::uint32_t j = 0; j < cfg_.n_rsus; ++j)
      if (i != j && in_range(rsu_pos[i], rsu_pos[j], cfg_.rsu_range)) {
        backbone_.adj[i].push_back(j);
        rsus_[i].nbrs.push_back(j);
        auto& o = rsus_[i].obs[j];
        o.hist = BeaconRateHistory(cfg_.z_slots);
        o.routing.reset(0);
      }

  reactive_ = std::make_unique<ReactiveRouting>(backbone_);
  ls_ = std::make_unique<LinkStateRouting>(backbone_);
  dv_ = std::make_unique<DistanceVectorRouting>(backbone_, cfg_.max_hops);

  mobility_ = std::make_unique<MobilityModel>(grid, cfg_.vehicle_speed,
                                              cfg_.n_vehicles, rng_mob_);
  vehicles_.resize(cfg_.n_vehicles);
  for (std::uint32_t i = 0; i < cfg_.n_vehicles; ++i)
    vehicles_[i].malicious = roles_.vehicle_malicious[i];

  vgrid_.init(grid.extent() + 2.0 * cfg_.rsu_range, cfg_.vehicle_range);
  snapshot_.resize(cfg_.n_vehicles);

  const std::uint32_t n_src_veh =
      std::min(cfg_.n_vehicle_sources, cfg_.n_vehicles);
  for (std::uint32_t i = 0; i < n_src_veh; ++i)
    sources_.push_back(vehicle_id(i));
  for (std::uint32_t i = 0; i < cfg_.n_rsus; ++i)
    sources_.push_back(rsu_id(i));
}

void Simulator::seed_events() {
  on_mobility_tick();  // t = 0 snapshot; reschedules itself

  Event ev;
  ev.action = EventAction::RoutingTick;
  ev.fire_time = kRoutingPhase;
  queue_.schedule(ev);

  ev = Event{};
  ev.action = EventAction::BeaconTick;
  ev.fire_time = kBeaconPhase;
  queue_.schedule(ev);

  ev = Event{};
  ev.action = EventAction::ObservationWindowEnd;
  ev.fire_time = cfg_.window;
  queue_.schedule(ev);

  if (cfg_.event_period > 0.0 && cfg_.event_period + kEventPhase <= cfg_.sim_duration) {
    ev = Event{};
    ev.action = EventAction::TrafficEventStart;
    ev.fire_time = cfg_.event_period + kEventPhase;
    queue_.schedule(ev);
  }

  const double period = 1.0 / cfg_.pkt_rate;
  for (std::uint32_t s = 0; s < sources_.size(); ++s) {
    ev = Event{};
    ev.action = EventAction::PacketInject;
    ev.key = s;
    ev.fire_time = rng_traffic_.uniform(0.0, period);
    queue_.schedule(ev);
  }
}

RunResult Simulator::run() {
  build_world();
  seed_events();

  while (!queue_.empty()) {
    Event ev = queue_.pop();
    if (ev.fire_time > cfg_.sim_duration) break;
    ++events_processed_;
    switch (ev.action) {
      case EventAction::Deliver: on_deliver(ev); break;
      case EventAction::BeaconTick: on_beacon_tick(); break;
      case EventAction::ObservationWindowEnd: on_window_end(); break;
      case EventAction::MobilityTick: on_mobility_tick(); break;
      case EventAction::TrafficEventStart: on_traffic_event(); break;
      case EventAction::PacketInject:
        on_packet_inject(static_cast<std::uint32_t>(ev.key));
        break;
      case EventAction::WatchdogTimeout:
        on_watchdog_timeout(ev.target.index, ev.key);
        break;
      case EventAction::RoutingTick: on_routing_tick(); break;
      case EventAction::AlertRelay: on_alert_relay(ev); break;
    }
  }

  RunResult out;
  finalize(out);
  return out;
}

// ---------------------------------------------------------------- ticks

void Simulator::on_mobility_tick() {
  const double t = now();
  if (t > 0.0) mobility_->tick(cfg_.beacon_period, rng_mob_);
  const auto& vs = mobility_->vehicles();
  vgrid_.rebuild(vs, mobility_->grid().origin - cfg_.rsu_range);
  for (std::uint32_t i = 0; i < vs.size(); ++i)
    snapshot_[i] = VehicleSnapshot{vs[i].pos, vs[i].speed()};

  for (auto& r : rsus_) {
    std::uint32_t count = 0;
    double speed_sum = 0.0;
    vgrid_.for_each_within(r.pos, cfg_.rsu_range, vs, [&](std::uint32_t i) {
      ++count;
      speed_sum += vs[i].speed();
    });
    r.adjacent_count = count;
    r.est_count_sum += count;
    r.est_speed_sum += speed_sum;
    r.est_n += count;
    ++r.est_ticks;
  }

  const double next = t + cfg_.beacon_period;
  if (next <= cfg_.sim_duration) {
    Event ev;
    ev.action = EventAction::MobilityTick;
    ev.fire_time = next;
    queue_.schedule(ev);
  }
}

TrafficEstimate Simulator::truth_estimate(std::uint32_t rsu) const {
  const auto& r = rsus_[rsu];
  TrafficEstimate e;
  if (r.est_ticks == 0 || r.disc_road_km <= 0.0) return e;
  e.samples = static_cast<std::uint32_t>(r.est_n);
  if (r.est_n > 0) e.speed = r.est_speed_sum / static_cast<double>(r.est_n);
  e.density = (r.est_count_sum / r.est_ticks) / r.disc_road_km;
  return e;
}

void Simulator::emit_rsu_beacons(std::uint32_t ri) {
  auto& r = rsus_[ri];
  BeaconTickPlan plan;
  if (r.malicious) plan = rsu_on_beacon_tick(cfg_.adversary, rng_adv_);

  // Claimed content starts from the true local traffic state.
  const auto est = GroundTruth::traffic_around(
      r.pos, cfg_.rsu_range, r.disc_road_km, snapshot_);
  const Environment& env = truth_.environment_at(r.pos);

  for (std::uint32_t k = 0; k < plan.burst; ++k) {
    Beacon b;
    b.sender = rsu_id(ri);
    b.position = r.pos;
    b.timestamp = now();
    b.speed_avg = est.speed;
    b.density = est.density;
    b.temperature = env.temperature;
    b.humidity = env.humidity;
    b.carbon_level = env.carbon_level;
    b.seq = ++r.beacon_seq;
    if (plan.falsify) {
      b.speed_avg *= 1.0 + cfg_.adversary.falsify_factor * cfg_.t_h1;
      b.density *= 1.0 + cfg_.adversary.falsify_factor * cfg_.t_h1;
      b.temperature *= 1.0 + cfg_.adversary.falsify_factor * cfg_.t_h2;
      b.humidity *= 1.0 + cfg_.adversary.falsify_factor * cfg_.t_h2;
      b.carbon_level *= 1.0 + cfg_.adversary.falsify_factor * cfg_.t_h2;
    }
    ++beacons_sent_;

    for (std::uint32_t nb : r.nbrs) {
      Event ev;
      ev.action = EventAction::Deliver;
      ev.fire_time = now() + propagation_and_tx_delay(
          kCtrlBits, distance(r.pos, rsus_[nb].pos), cfg_.tx_rate, cfg_.v_prop);
      ev.target = rsu_id(nb);
      ev.actor = b.sender;
      ev.payload = b;
      queue_.schedule(ev);
    }
    vgrid_.for_each_within(r.pos, cfg_.rsu_range, mobility_->vehicles(),
                           [&](std::uint32_t vi) {
      Event ev;
      ev.action = EventAction::Deliver;
      ev.fire_time = now() + propagation_and_tx_delay(
          kCtrlBits, distance(r.pos, snapshot_[vi].pos), cfg_.tx_rate,
          cfg_.v_prop);
      ev.target = vehicle_id(vi);
      ev.actor = b.sender;
      ev.key = plan.falsify ? 1 : 0;
      ev.payload = b;
      queue_.schedule(ev);
    });
  }
}

void Simulator::on_beacon_tick() {
  for (std::uint32_t i = 0; i < rsus_.size(); ++i) emit_rsu_beacons(i);
  const double next = now() + cfg_.beacon_period;
  if (next <= cfg_.sim_duration) {
    Event ev;
    ev.action = EventAction::BeaconTick;
    ev.fire_time = next;
    queue_.schedule(ev);
  }
}

bool Simulator::excluded_by(std::uint32_t viewer, std::uint32_t subject) const {
  const auto& ledger = rsus_[viewer].ledger;
  auto it = ledger.find(subject);
  if (it == ledger.end() || !it->second.has_evidence) return false;
  return it->second.classification == Classification::COMPROMISED;
}

void Simulator::on_routing_tick() {
  const ExcludeFn excl = [this](std::uint32_t v, std::uint32_t s) {
    return excluded_by(v, s);
  };
  if (cfg_.protocol == RoutingProtocol::ProactiveLS)
    ls_->update_all(cfg_.trust_filter, excl);
  else if (cfg_.protocol == RoutingProtocol::ProactiveDV)
    dv_->round(cfg_.trust_filter, excl);

  const double next = now() + cfg_.route_update_period;
  if (next <= cfg_.sim_duration) {
    Event ev;
    ev.action = EventAction::RoutingTick;
    ev.fire_time = next;
    queue_.schedule(ev);
  }
}

// ---------------------------------------------------------------- alerts

Environment Simulator::sensed_environment(const Position& p) {
  const Environment& env = truth_.environment_at(p);
  Environment s;
  s.temperature =
      env.temperature * (1.0 + rng_sensors_.uniform(-cfg_.sensor_jitter,
                                                    cfg_.sensor_jitter));
  s.humidity = env.humidity * (1.0 + rng_sensors_.uniform(-cfg_.sensor_jitter,
                                                          cfg_.sensor_jitter));
  s.carbon_level =
      env.carbon_level * (1.0 + rng_sensors_.uniform(-cfg_.sensor_jitter,
                                                     cfg_.sensor_jitter));
  return s;
}

void Simulator::broadcast_alert(const TrafficAlert& a, const Position& from,
                                bool to_vehicles, bool to_rsus, int ttl,
                                std::uint32_t skip_vehicle) {
  ++alerts_sent_;
  if (to_vehicles) {
    vgrid_.for_each_within(from, cfg_.vehicle_range, mobility_->vehicles(),
                           [&](std::uint32_t vi) {
      if (vi == skip_vehicle) return;
      Event ev;
      ev.action = EventAction::Deliver;
      ev.fire_time = now() + propagation_and_tx_delay(
          kCtrlBits, distance(from, snapshot_[vi].pos), cfg_.tx_rate,
          cfg_.v_prop);
      ev.target = vehicle_id(vi);
      ev.actor = a.sender_id;
      ev.key = static_cast<std::uint64_t>(ttl);
      ev.payload = a;
      queue_.schedule(ev);
    });
  }
  if (to_rsus) deliver_alert_to_rsus(a, from);
}

void Simulator::deliver_alert_to_rsus(const TrafficAlert& a,
                                      const Position& from) {
  for (std::uint32_t i = 0; i < rsus_.size(); ++i) {
    if (!in_range(from, rsus_[i].pos, cfg_.rsu_range)) continue;
    Event ev;
    ev.action = EventAction::Deliver;
    ev.fire_time = now() + propagation_and_tx_delay(
        kCtrlBits, distance(from, rsus_[i].pos), cfg_.tx_rate, cfg_.v_prop);
    ev.target = rsu_id(i);
    ev.actor = a.sender_id;
    ev.payload = a;
    queue_.schedule(ev);
  }
}

void Simulator::veh_on_beacon(std::uint32_t vi, const Beacon& b,
                              bool falsified) {
  auto& v = vehicles_[vi];
  const std::uint32_t ri = b.sender.index;
  auto& cache = v.recent[ri];
  cache.push_back(b);
  if (cache.size() > kBeaconCacheDepth) cache.pop_front();

  const std::uint64_t mark = beacon_key(ri, b.seq);
  const Position vpos = snapshot_[vi].pos;

  if (!v.malicious) {
    // Honest sensors jitter a couple of percent; an accurate beacon can
    // never cross the t_h2 tolerance, so the check only runs on content
    // that actually deviates.
    if (!falsified) return;
    auto alert = vehicle_sensor_check(sensed_environment(vpos), b,
                                      rsus_[ri].pos, cfg_.t_h2, now(),
                                      vehicle_id(vi));
    if (!alert) return;
    alert->position = vpos;
    v.ignore_marks.insert(mark);
    v.ignored_rsus.insert(ri);
    broadcast_alert(*alert, vpos, true, true, kIgnoreAlertTtl, vi);
    return;
  }

  // Malicious vehicle: falsely accuse accurate beacons, shield inaccurate
  // ones (suppress or fake a confirmation).
  if (!falsified) {
    if (!rng_adv_.bernoulli(cfg_.adversary.veh_false_ignore_p)) return;
    TrafficAlert a;
    a.sender_id = vehicle_id(vi);
    a.position = vpos;
    a.timestamp = now();
    a.event_type = EventType::IGNORE_RSU;
    a.event_value = 0;
    a.location = rsus_[ri].pos;
    a.event_key = b.seq;
    v.ignore_marks.insert(mark);
    broadcast_alert(a, vpos, true, true, kIgnoreAlertTtl, vi);
    return;
  }
  if (rng_adv_.bernoulli(cfg_.adversary.veh_suppress_or_flip_p)) {
    v.ignore_marks.insert(mark);
    if (rng_adv_.bernoulli(0.5)) return;  // suppress
    TrafficAlert a;
    a.sender_id = vehicle_id(vi);
    a.position = vpos;
    a.timestamp = now();
    a.event_type = EventType::IGNORE_RSU;
    a.event_value = 1;  // vouch for the falsified beacon
    a.location = rsus_[ri].pos;
    a.event_key = b.seq;
    broadcast_alert(a, vpos, true, true, kIgnoreAlertTtl, vi);
    return;
  }
  auto alert = vehicle_sensor_check(sensed_environment(vpos), b, rsus_[ri].pos,
                                    cfg_.t_h2, now(), vehicle_id(vi));
  if (!alert) return;
  alert->position = vpos;
  v.ignore_marks.insert(mark);
  broadcast_alert(*alert, vpos, true, true, kIgnoreAlertTtl, vi);
}

void Simulator::handle_ignore_alert_at_vehicle(std::uint32_t vi,
                                               const TrafficAlert& a, int ttl) {
  auto& v = vehicles_[vi];
  // Identify the accused RSU from the alert location.
  std::uint32_t subject = std::numeric_limits<std::uint32_t>::max();
  for (std::uint32_t i = 0; i < rsus_.size(); ++i)
    if (same_alert_location(rsus_[i].pos, a.location)) {
      subject = i;
      break;
    }
  if (subject == std::numeric_limits<std::uint32_t>::max()) return;
  const std::uint64_t mark = beacon_key(subject, a.event_key);
  if (!v.ignore_marks.insert(mark).second) return;  // already handled

  const Position vpos = snapshot_[vi].pos;
  if (v.malicious) {
    switch (vehicle_on_relay_alert(cfg_.adversary.veh_suppress_or_flip_p,
                                   rng_adv_)) {
      case VehicleAlertAction::DROP:
        return;
      case VehicleAlertAction::FLIP: {
        TrafficAlert f = a;
        f.event_value = 1 - f.event_value;
        if (ttl > 1) broadcast_alert(f, vpos, true, true, ttl - 1, vi);
        return;
      }
      case VehicleAlertAction::PASS:
        if (ttl > 1) broadcast_alert(a, vpos, true, true, ttl - 1, vi);
        return;
    }
    return;
  }

  // Honest relay: re-verify against own sensors and the beacon copy.
  std::optional<Beacon> copy;
  auto rit = v.recent.find(subject);
  if (rit != v.recent.end())
    for (const Beacon& b : rit->second)
      if (b.seq == a.event_key) {
        copy = b;
        break;
      }
  const Environment sensors = sensed_environment(vpos);
  if (relay_ignore_alert(a, copy, sensors, cfg_.t_h2) ==
      RelayDecision::FORWARD) {
    if (ttl > 1) broadcast_alert(a, vpos, true, true, ttl - 1, vi);
    return;
  }
  // Conflict: drop the alert and counter it with the relay's own verdict.
  TrafficAlert counter;
  counter.sender_id = vehicle_id(vi);
  counter.position = vpos;
  counter.timestamp = now();
  counter.event_type = EventType::IGNORE_RSU;
  counter.event_value = a.event_value == 0 ? 1 : 0;
  counter.location = a.location;
  counter.event_key = a.event_key;
  ++alerts_sent_;
  deliver_alert_to_rsus(counter, vpos);
}

void Simulator::veh_on_alert(std::uint32_t vi, const TrafficAlert& a, int ttl) {
  if (a.event_type == EventType::IGNORE_RSU) {
    handle_ignore_alert_at_vehicle(vi, a, ttl);
    return;
  }
  auto& v = vehicles_[vi];
  if (v.event_relay_done.count(a.event_key)) return;
  v.event_values[a.event_key].push_back(a.event_value);
  if (v.event_relay_scheduled.insert(a.event_key).second) {
    Event ev;
    ev.action = EventAction::AlertRelay;
    ev.fire_time = now() + kRelayCollectDelay;
    ev.target = vehicle_id(vi);
    ev.key = a.event_key;
    ev.payload = a;  // template carrying type/location
    queue_.schedule(ev);
  }
}

void Simulator::rsu_on_alert(std::uint32_t r1, const TrafficAlert& a) {
  auto& r = rsus_[r1];
  if (a.event_type == EventType::IGNORE_RSU) {
    // Vote on a specific beacon of a one-hop neighbor.
    for (std::uint32_t nb : r.nbrs) {
      if (!same_alert_location(rsus_[nb].pos, a.location)) continue;
      auto oit = r.obs.find(nb);
      if (oit == r.obs.end()) break;
      auto sit = oit->second.slots.find(a.event_key);
      if (sit == oit->second.slots.end()) break;
      BeaconSlot& slot = sit->second;
      const double dt = a.timestamp - slot.ts;
      if (dt < 0.0 || dt > cfg_.t_h3) break;
      if (a.sender_id.kind != NodeKind::VEHICLE) break;
      if (!slot.voters.insert(a.sender_id.index).second) break;
      ++slot.total;
      if (a.event_value == 0) ++slot.invalid;
      break;
    }
    return;
  }
  if (a.sender_id.kind == NodeKind::RSU) {
    r.rsu_alerts.try_emplace({a.sender_id.index, a.event_key}, a);
  } else {
    r.veh_alerts[a.event_key].try_emplace(a.sender_id.index, a);
  }
}

void Simulator::on_traffic_event() {
  const std::uint32_t vi =
      static_cast<std::uint32_t>(rng_events_.below(cfg_.n_vehicles));
  GroundTruthEvent ev;
  ev.id = next_event_id_++;
  ev.type = EventType::ACCIDENT;
  ev.location = snapshot_[vi].pos;
  ev.start_time = now();
  truth_.add_event(ev);

  // Vehicles inside the sensing radius observe the event directly.
  vgrid_.for_each_within(ev.location, cfg_.sensing_radius, mobility_->vehicles(),
                         [&](std::uint32_t wi) {
    auto& w = vehicles_[wi];
    w.event_relay_done.insert(ev.id);
    int value = 1;
    if (w.malicious && rng_adv_.bernoulli(cfg_.adversary.veh_alert_modify_p))
      value = 0;
    TrafficAlert a;
    a.sender_id = vehicle_id(wi);
    a.position = snapshot_[wi].pos;
    a.timestamp = now();
    a.event_type = ev.type;
    a.event_value = value;
    a.location = ev.location;
    a.event_key = ev.id;
    broadcast_alert(a, a.position, true, true, 0, wi);
  });

  // RSUs covering the event report it after a sensing delay.
  for (std::uint32_t i = 0; i < rsus_.size(); ++i) {
    if (!in_range(rsus_[i].pos, ev.location, cfg_.rsu_range)) continue;
    Event rel;
    rel.action = EventAction::AlertRelay;
    rel.fire_time = now() + kRsuAlertDelay;
    rel.target = rsu_id(i);
    rel.key = ev.id;
    TrafficAlert tpl;
    tpl.event_type = ev.type;
    tpl.location = ev.location;
    tpl.event_key = ev.id;
    rel.payload = tpl;
    queue_.schedule(rel);
  }

  const double next = now() + cfg_.event_period;
  if (next <= cfg_.sim_duration) {
    Event e2;
    e2.action = EventAction::TrafficEventStart;
    e2.fire_time = next;
    queue_.schedule(e2);
  }
}

void Simulator::on_alert_relay(const Event& ev) {
  const auto* tpl = std::get_if<TrafficAlert>(&ev.payload);
  if (tpl == nullptr) return;

  if (ev.target.kind == NodeKind::RSU) {
    const std::uint32_t ri = ev.target.index;
    auto& r = rsus_[ri];
    TrafficAlert a = *tpl;
    a.sender_id = rsu_id(ri);
    a.position = r.pos;
    a.timestamp = now();
    a.event_value = 1;
    if (r.malicious && rng_adv_.bernoulli(cfg_.adversary.rsu_alert_alter_p))
      a.event_value = 0;
    ++alerts_sent_;
    // One-hop neighbors receive the RSU's assessment of the event.
    for (std::uint32_t nb : r.nbrs) {
      Event d;
      d.action = EventAction::Deliver;
      d.fire_time = now() + propagation_and_tx_delay(
          kCtrlBits, distance(r.pos, rsus_[nb].pos), cfg_.tx_rate, cfg_.v_prop);
      d.target = rsu_id(nb);
      d.actor = a.sender_id;
      d.payload = a;
      queue_.schedule(d);
    }
    return;
  }

  // Vehicle relay: plurality over the copies collected so far.
  const std::uint32_t vi = ev.target.index;
  auto& v = vehicles_[vi];
  if (!v.event_relay_done.insert(ev.key).second) return;
  auto values_it = v.event_values.find(ev.key);
  const std::vector<int> values =
      values_it == v.event_values.end() ? std::vector<int>{}
                                        : std::move(values_it->second);
  if (values_it != v.event_values.end()) v.event_values.erase(values_it);
  const RelayOutcome out = vehicle_relay_event_alert(values, false, 0);
  if (!out.forward) return;

  TrafficAlert a = *tpl;
  a.sender_id = vehicle_id(vi);
  a.position = snapshot_[vi].pos;
  a.timestamp = now();
  a.event_value = out.event_value;
  if (v.malicious) {
    switch (vehicle_on_relay_alert(cfg_.adversary.veh_alert_modify_p,
                                   rng_adv_)) {
      case VehicleAlertAction::DROP: return;
      case VehicleAlertAction::FLIP: a.event_value = 1 - a.event_value; break;
      case VehicleAlertAction::PASS: break;
    }
  }
  broadcast_alert(a, a.position, true, true, 0, vi);
}

// ---------------------------------------------------------------- data

std::uint32_t Simulator::nearest_rsu(const Position& p) const {
  std::uint32_t best = 0;
  double best_d = std::numeric_limits<double>::max();
  for (std::uint32_t i = 0; i < rsus_.size(); ++i) {
    const double d = distance(rsus_[i].pos, p);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

std::uint32_t Simulator::covering_rsu(const Position& p,
                                      std::uint32_t viewer) const {
  // Nearest covering RSU; under the trust filter, the nearest one the
  // viewer does not distrust, falling back to plain nearest.
  std::uint32_t best = nearest_rsu(p);
  if (!cfg_.trust_filter) return best;
  std::uint32_t trusted = std::numeric_limits<std::uint32_t>::max();
  double trusted_d = std::numeric_limits<double>::max();
  for (std::uint32_t i = 0; i < rsus_.size(); ++i) {
    const double d = distance(rsus_[i].pos, p);
    if (d > cfg_.rsu_range) continue;
    if (excluded_by(viewer, i)) continue;
    if (d < trusted_d) {
      trusted_d = d;
      trusted = i;
    }
  }
  return trusted == std::numeric_limits<std::uint32_t>::max() ? best : trusted;
}

std::uint32_t Simulator::serving_rsu_for_packet(std::uint32_t holder,
                                                std::uint32_t veh) {
  if (cfg_.protocol != RoutingProtocol::Reactive)
    return covering_rsu(snapshot_[veh].pos, holder);
  // On-demand routing resolves the destination's location once and caches
  // it; stale entries cost extra hops at the old serving RSU.
  auto it = location_cache_.find(veh);
  if (it != location_cache_.end() && it->second.second > now())
    return it->second.first;
  const std::uint32_t serving = covering_rsu(snapshot_[veh].pos, holder);
  location_cache_[veh] = {serving, now() + kLocationCacheTtl};
  return serving;
}

std::int32_t Simulator::next_hop_toward(std::uint32_t u, std::uint32_t target) {
  const ExcludeFn excl = [this](std::uint32_t v, std::uint32_t s) {
    return excluded_by(v, s);
  };
  switch (cfg_.protocol) {
    case RoutingProtocol::Reactive: {
      auto r = reactive_->route(u, target, cfg_.trust_filter, excl);
      if (r && r->path.size() > 1)
        return static_cast<std::int32_t>(r->path[1]);
      if (cfg_.trust_filter) {
        // No trusted path: fall back to an unfiltered discovery rather
        // than failing the delivery outright.
        auto p = shortest_path(backbone_, u, target, nullptr);
        if (p && p->size() > 1) return static_cast<std::int32_t>((*p)[1]);
      }
      return -1;
    }
    case RoutingProtocol::ProactiveLS: {
      const std::int32_t nh = ls_->next_hop(u, target);
      if (nh >= 0) return nh;
      if (cfg_.trust_filter && ls_->ready(u)) {
        auto p = shortest_path(backbone_, u, target, nullptr);
        if (p && p->size() > 1) return static_cast<std::int32_t>((*p)[1]);
      }
      return -1;
    }
    case RoutingProtocol::ProactiveDV: {
      const std::int32_t nh = dv_->next_hop(u, target);
      if (nh >= 0 && static_cast<std::uint32_t>(nh) != u) return nh;
      if (cfg_.trust_filter) {
        auto p = shortest_path(backbone_, u, target, nullptr);
        if (p && p->size() > 1) return static_cast<std::int32_t>((*p)[1]);
      }
      return -1;
    }
  }
  return -1;
}

void Simulator::close_packet(std::uint64_t pid, Terminal t, bool intact,
                             double latency) {
  auto it = registry_.find(pid);
  if (it == registry_.end() || it->second.closed) return;
  it->second.closed = true;
  switch (t) {
    case Terminal::Delivered:
      ++packets_.delivered;
      if (!intact) ++packets_.delivered_modified;
      ++net_.packets_received;
      net_.bytes_received += cfg_.pkt_size;
      net_.latencies.push_back(latency);
      break;
    case Terminal::Malice: ++packets_.dropped_by_malice; break;
    case Terminal::NoRoute: ++packets_.dropped_no_route; break;
    case Terminal::HopLimit: ++packets_.dropped_hop_limit; break;
  }
}

void Simulator::notify_overhear(NodeId prev, const DataPacket& sent,
                                std::uint32_t u) {
  if (prev.kind != NodeKind::RSU) return;
  auto& p = rsus_[prev.index];
  auto it = p.pending.find(sent.id);
  if (it == p.pending.end()) return;
  auto oit = p.obs.find(u);
  if (oit != p.obs.end())
    p.wb.on_overhear(sent, rsu_id(u), now(), oit->second.routing);
  else
    p.wb.cancel(sent.id);
  p.pending.erase(it);
}

void Simulator::notify_cancel(NodeId prev, std::uint64_t pid) {
  if (prev.kind != NodeKind::RSU) return;
  auto& p = rsus_[prev.index];
  p.wb.cancel(pid);
  p.pending.erase(pid);
}

void Simulator::transmit_packet(std::uint32_t u,
                                const std::shared_ptr<const DataPacket>& pkt,
                                std::uint32_t next) {
  auto& r = rsus_[u];
  const double dist = distance(r.pos, rsus_[next].pos);
  const double bits = cfg_.pkt_size * 8.0;
  const double t_exp = expected_forward_time(bits, cfg_.tx_rate, dist,
                                             cfg_.v_prop, cfg_.t_other);
  if (r.pending.count(pkt->id)) {
    // The packet looped back while an earlier forward from this RSU is still
    // outstanding; retire the stale entry without charging the old next hop.
    r.wb.cancel(pkt->id);
    r.pending.erase(pkt->id);
  }
  const std::uint32_t serial = ++tx_serial_;
  r.pending[pkt->id] = Pending{pkt, next, 1, serial};
  r.wb.on_forward_to_next_hop(*pkt, rsu_id(next), now(), t_exp);
  auto oit = r.obs.find(next);
  if (oit != r.obs.end()) ++oit->second.forwards;

  Event d;
  d.action = EventAction::Deliver;
  d.fire_time = now() + propagation_and_tx_delay(bits, dist, cfg_.tx_rate,
                                                 cfg_.v_prop);
  d.target = rsu_id(next);
  d.actor = rsu_id(u);
  d.key = pkt->id;
  d.payload = pkt;
  queue_.schedule(d);

  Event to;
  to.action = EventAction::WatchdogTimeout;
  to.fire_time = now() + t_exp;
  to.target = rsu_id(u);
  to.key = pkt->id | (static_cast<std::uint64_t>(serial) << 32);
  queue_.schedule(to);
}

void Simulator::rsu_on_packet(std::uint32_t u,
                              std::shared_ptr<const DataPacket> pkt,
                              NodeId prev) {
  auto& r = rsus_[u];
  const std::uint64_t pid = pkt->id;

  // Final destination is this RSU: consume.
  if (pkt->destination == rsu_id(u)) {
    notify_cancel(prev, pid);
    auto rit = registry_.find(pid);
    const bool intact =
        rit != registry_.end() && packet_digest(*pkt) == rit->second.digest;
    close_packet(pid, Terminal::Delivered, intact, now() - pkt->created_at);
    return;
  }

  const bool dest_is_vehicle = pkt->destination.kind == NodeKind::VEHICLE;
  const bool downlink =
      dest_is_vehicle && in_range(r.pos, snapshot_[pkt->destination.index].pos,
                                  cfg_.rsu_range);

  if (pkt->hop_count + 1 > static_cast<int>(cfg_.max_hops)) {
    notify_cancel(prev, pid);
    close_packet(pid, Terminal::HopLimit);
    return;
  }

  // Adversarial relay behavior (never on packets this RSU originated).
  if (r.malicious && !(pkt->source == rsu_id(u))) {
    const RelayAction act = rsu_on_relay(cfg_.adversary, rng_adv_);
    if (act == RelayAction::DROP) {
      // Silent drop; a watching previous RSU recovers via its timeout.
      if (prev.kind != NodeKind::RSU) close_packet(pid, Terminal::Malice);
      return;
    }
    if (act == RelayAction::FORWARD_MODIFIED) {
      auto mod = std::make_shared<DataPacket>(*pkt);
      if (!mod->immutable_payload.empty()) mod->immutable_payload[0] ^= 0xFF;
      pkt = std::move(mod);
    }
  }

  if (downlink) {
    auto copy = std::make_shared<DataPacket>(*pkt);
    ++copy->hop_count;
    notify_overhear(prev, *copy, u);
    Event d;
    d.action = EventAction::Deliver;
    d.fire_time = now() + propagation_and_tx_delay(
        cfg_.pkt_size * 8.0,
        distance(r.pos, snapshot_[pkt->destination.index].pos), cfg_.tx_rate,
        cfg_.v_prop);
    d.target = pkt->destination;
    d.actor = rsu_id(u);
    d.key = pid;
    d.payload = std::shared_ptr<const DataPacket>(std::move(copy));
    queue_.schedule(d);
    return;
  }

  const std::uint32_t target =
      dest_is_vehicle ? serving_rsu_for_packet(u, pkt->destination.index)
                      : pkt->destination.index;
  if (target == u && dest_is_vehicle) {
    // Cached location is stale and the vehicle left; refresh and re-route.
    location_cache_.erase(pkt->destination.index);
  }
  const std::uint32_t resolved_target =
      (target == u && dest_is_vehicle)
          ? serving_rsu_for_packet(u, pkt->destination.index)
          : target;
  if (resolved_target == u) {
    notify_cancel(prev, pid);
    close_packet(pid, Terminal::NoRoute);
    return;
  }

  const std::int32_t next = next_hop_toward(u, resolved_target);
  if (next < 0) {
    notify_cancel(prev, pid);
    close_packet(pid, Terminal::NoRoute);
    return;
  }

  auto copy = std::make_shared<DataPacket>(*pkt);
  ++copy->hop_count;
  std::shared_ptr<const DataPacket> sent = std::move(copy);
  notify_overhear(prev, *sent, u);
  transmit_packet(u, sent, static_cast<std::uint32_t>(next));
}

void Simulator::veh_on_packet(std::uint32_t /*v*/,
                              const std::shared_ptr<const DataPacket>& pkt) {
  auto rit = registry_.find(pkt->id);
  const bool intact =
      rit != registry_.end() && packet_digest(*pkt) == rit->second.digest;
  close_packet(pkt->id, Terminal::Delivered, intact, now() - pkt->created_at);
}

void Simulator::on_watchdog_timeout(std::uint32_t ri, std::uint64_t key) {
  const std::uint64_t pid = key & 0xFFFFFFFFULL;
  const auto serial = static_cast<std::uint32_t>(key >> 32);
  auto& r = rsus_[ri];
  auto it = r.pending.find(pid);
  if (it == r.pending.end()) return;  // overheard in time
  if (it->second.tx_serial != serial) return;  // stale timeout after re-forward
  const std::uint32_t next = it->second.next;
  auto oit = r.obs.find(next);
  if (oit != r.obs.end()) r.wb.on_timeout(pid, now(), oit->second.routing);
  else r.wb.cancel(pid);

  if (it->second.attempts <= cfg_.retry_limit) {
    ++it->second.attempts;
    it->second.tx_serial = ++tx_serial_;
    auto pkt = it->second.pkt;
    const double dist = distance(r.pos, rsus_[next].pos);
    const double bits = cfg_.pkt_size * 8.0;
    const double t_exp = expected_forward_time(bits, cfg_.tx_rate, dist,
                                               cfg_.v_prop, cfg_.t_other);
    r.wb.on_forward_to_next_hop(*pkt, rsu_id(next), now(), t_exp);
    if (oit != r.obs.end()) ++oit->second.forwards;

    Event d;
    d.action = EventAction::Deliver;
    d.fire_time = now() + propagation_and_tx_delay(bits, dist, cfg_.tx_rate,
                                                   cfg_.v_prop);
    d.target = rsu_id(next);
    d.actor = rsu_id(ri);
    d.key = pid;
    d.payload = pkt;
    queue_.schedule(d);

    Event to;
    to.action = EventAction::WatchdogTimeout;
    to.fire_time = now() + t_exp;
    to.target = rsu_id(ri);
    to.key = pid | (static_cast<std::uint64_t>(it->second.tx_serial) << 32);
    queue_.schedule(to);
    return;
  }
  r.pending.erase(it);
  close_packet(pid, Terminal::Malice);
}

void Simulator::on_packet_inject(std::uint32_t slot) {
  const NodeId src = sources_[slot];
  const std::uint64_t total_nodes = cfg_.n_rsus + cfg_.n_vehicles;
  const std::uint64_t src_linear =
      src.kind == NodeKind::RSU ? src.index
                                : cfg_.n_rsus + static_cast<std::uint64_t>(src.index);
  std::uint64_t pick = rng_traffic_.below(total_nodes - 1);
  if (pick >= src_linear) ++pick;  // uniform over everyone but the source
  const NodeId dst =
      pick < cfg_.n_rsus
          ? rsu_id(static_cast<std::uint32_t>(pick))
          : vehicle_id(static_cast<std::uint32_t>(pick - cfg_.n_rsus));

  auto pkt = std::make_shared<DataPacket>();
  pkt->id = next_packet_id_++;
  pkt->source = src;
  pkt->destination = dst;
  pkt->created_at = now();
  pkt->immutable_payload.resize(16);
  std::memcpy(pkt->immutable_payload.data(), &pkt->id, sizeof(pkt->id));

  registry_[pkt->id] = PacketInfo{packet_digest(*pkt), false};
  ++packets_.injected;
  ++net_.packets_sent;

  if (src.kind == NodeKind::RSU) {
    rsu_on_packet(src.index, pkt, src);
  } else {
    // Uplink to the nearest RSU; with the filter on, the nearest one this
    // vehicle has not flagged through its own sensor evidence.
    const Position& vpos = snapshot_[src.index].pos;
    std::uint32_t access = nearest_rsu(vpos);
    if (cfg_.trust_filter) {
      const auto& ignored = vehicles_[src.index].ignored_rsus;
      double best_d = std::numeric_limits<double>::max();
      std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
      for (std::uint32_t i = 0; i < rsus_.size(); ++i) {
        const double d = distance(rsus_[i].pos, vpos);
        if (d > cfg_.rsu_range || ignored.count(i)) continue;
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      if (best != std::numeric_limits<std::uint32_t>::max()) access = best;
    }
    auto copy = std::make_shared<DataPacket>(*pkt);
    ++copy->hop_count;
    Event d;
    d.action = EventAction::Deliver;
    d.fire_time = now() + propagation_and_tx_delay(
        cfg_.pkt_size * 8.0,
        distance(vpos, rsus_[access].pos), cfg_.tx_rate,
        cfg_.v_prop);
    d.target = rsu_id(access);
    d.actor = src;
    d.key = pkt->id;
    d.payload = std::shared_ptr<const DataPacket>(std::move(copy));
    queue_.schedule(d);
  }

  const double next = now() + 1.0 / cfg_.pkt_rate;
  if (next <= cfg_.sim_duration) {
    Event ev;
    ev.action = EventAction::PacketInject;
    ev.key = slot;
    ev.fire_time = next;
    queue_.schedule(ev);
  }
}

void Simulator::on_deliver(const Event& ev) {
  if (const auto* b = std::get_if<Beacon>(&ev.payload)) {
    if (ev.target.kind == NodeKind::RSU)
      rsu_on_beacon(ev.target.index, *b);
    else
      veh_on_beacon(ev.target.index, *b, ev.key != 0);
    return;
  }
  if (const auto* a = std::get_if<TrafficAlert>(&ev.payload)) {
    if (ev.target.kind == NodeKind::RSU)
      rsu_on_alert(ev.target.index, *a);
    else
      veh_on_alert(ev.target.index, *a, static_cast<int>(ev.key));
    return;
  }
  if (const auto* p =
          std::get_if<std::shared_ptr<const DataPacket>>(&ev.payload)) {
    if (ev.target.kind == NodeKind::RSU)
      rsu_on_packet(ev.target.index, *p, ev.actor);
    else
      veh_on_packet(ev.target.index, *p);
    return;
  }
  if (const auto* g =
          std::get_if<std::shared_ptr<const QTableBroadcast>>(&ev.payload)) {
    if (ev.target.kind == NodeKind::RSU) rsu_on_gossip(ev.target.index, **g);
    return;
  }
}

void Simulator::rsu_on_beacon(std::uint32_t r1, const Beacon& b) {
  auto& r = rsus_[r1];
  auto oit = r.obs.find(b.sender.index);
  if (oit == r.obs.end()) return;  // not a one-hop neighbor
  ObsState& o = oit->second;
  ++o.beacon_count;
  BeaconSlot slot;
  slot.ts = b.timestamp;
  slot.speed = b.speed_avg;
  slot.density = b.density;
  o.slots.emplace(b.seq, std::move(slot));
}

// ---------------------------------------------------------------- windows

void Simulator::rsu_on_gossip(std::uint32_t r1, const QTableBroadcast& bc) {
  auto& r = rsus_[r1];
  const std::uint32_t w =
      static_cast<std::uint32_t>(bc.timestamp / cfg_.window);
  if (bc.owner.index == r1) return;
  if (!r.gossip_seen.insert({bc.owner.index, w}).second) return;
  for (const auto& e : bc.entries)
    r.gossip[e.subject][bc.owner.index] = GossipEntry{e.q, w};
  if (bc.ttl > 1) {
    auto fwd = std::make_shared<QTableBroadcast>(bc);
    fwd->ttl = bc.ttl - 1;
    for (std::uint32_t nb : r.nbrs) {
      Event d;
      d.action = EventAction::Deliver;
      d.fire_time = now() + propagation_and_tx_delay(
          kCtrlBits, distance(r.pos, rsus_[nb].pos), cfg_.tx_rate, cfg_.v_prop);
      d.target = rsu_id(nb);
      d.actor = rsu_id(r1);
      d.payload = std::shared_ptr<const QTableBroadcast>(fwd);
      queue_.schedule(d);
    }
  }
}

double Simulator::neighbor_average(const RsuState& r1, std::uint32_t subject,
                                   std::uint32_t self, bool& found) const {
  found = false;
  auto git = r1.gossip.find(subject);
  if (git == r1.gossip.end()) return 0.0;
  const std::uint32_t w = windows_completed_;
  double sum = 0.0;
  std::uint32_t n = 0;
  for (const auto& [owner, entry] : git->second) {
    if (owner == self) continue;
    if (w > entry.window + kGossipFreshWindows) continue;
    sum += entry.q;
    ++n;
  }
  if (n == 0) return 0.0;
  found = true;
  return sum / n;
}

void Simulator::window_trust_for(std::uint32_t r1i) {
  auto& r1 = rsus_[r1i];
  const std::uint32_t w = windows_completed_;
  const LearningParams lp;

  // Pre-compute the event-alert groups seen this window.
  struct EventGroup {
    Position location;
    std::vector<TrafficAlert> veh;
  };
  std::map<std::uint64_t, EventGroup> groups;
  for (const auto& [eid, senders] : r1.veh_alerts) {
    EventGroup g;
    for (const auto& [sender, alert] : senders) {
      g.location = alert.location;
      g.veh.push_back(alert);
    }
    groups.emplace(eid, std::move(g));
  }
  for (const auto& [key, alert] : r1.rsu_alerts) {
    auto [it, inserted] = groups.try_emplace(key.second);
    if (inserted) it->second.location = alert.location;
  }

  for (std::uint32_t r2 : r1.nbrs) {
    ObsState& o = r1.obs[r2];

    const bool flood =
        flooding_check(o.hist, o.beacon_count, cfg_.normalize_bavg);
    double tb;
    if (flood) {
      tb = 0.0;
    } else {
      const TrafficEstimate est = truth_estimate(r2);
      const bool has_samples = est.samples > 0;
      // Stage 1 compares window means: instantaneous traffic counts swing
      // too much for a per-beacon comparison against a window aggregate.
      SpeedDensity claim_mean;
      if (!o.slots.empty()) {
        for (const auto& [seq, slot] : o.slots) {
          claim_mean.speed += slot.speed;
          claim_mean.density += slot.density;
        }
        claim_mean.speed /= static_cast<double>(o.slots.size());
        claim_mean.density /= static_cast<double>(o.slots.size());
      }
      const bool stage1 = verify_speed_density(
          SpeedDensity{est.speed, est.density}, claim_mean, cfg_.t_h1,
          has_samples && !o.slots.empty());
      std::vector<BeaconVerdict> verdicts;
      verdicts.reserve(o.slots.size());
      for (const auto& [seq, slot] : o.slots)
        verdicts.push_back(beacon_verdict(stage1, slot.invalid, slot.total,
                                          r1.adjacent_count, seq));
      tb = trust_beacon(verdicts);
    }

    const double tr = trust_routing(o.routing);

    int ta = 1;
    for (const auto& [eid, g] : groups) {
      if (!in_range(g.location, rsus_[r2].pos, cfg_.rsu_range)) continue;
      std::optional<TrafficAlert> rsu_alert;
      auto ait = r1.rsu_alerts.find({r2, eid});
      if (ait != r1.rsu_alerts.end()) rsu_alert = ait->second;
      if (rsu_alert && g.veh.empty()) continue;  // nothing to corroborate with
      ta = std::min(ta, trust_alert(rsu_alert, g.veh, cfg_.t_h));
    }

    DirectTrustInputs in;
    in.trust_routing = tr;
    in.trust_beacon = tb;
    in.trust_alert = ta;
    in.f_routing = static_cast<double>(o.forwards);
    in.f_beacon = static_cast<double>(o.beacon_count);
    in.t_n = cfg_.t_n();
    const double td = direct_trust_window(in);

    // Q learning on the one-hop subject.
    bool found = false;
    const double navg = neighbor_average(r1, r2, r1i, found);
    auto& qe = r1.qtable.entry(r2);
    qe.one_hop = true;
    if (!qe.bootstrapped) {
      qe.q = td;
      qe.bootstrapped = true;
    } else {
      qe.q = q_update(qe.q, td, found ? navg : qe.q, lp.alpha, lp.gamma);
    }

    auto& le = r1.ledger[r2];
    le.trust_direct = td;
    le.trust_indirect = found ? navg : 0.0;
    ledger_apply_window(le, td);

    TrustSample s;
    s.window = w;
    s.evaluator = r1i;
    s.subject = r2;
    s.trust_direct = td;
    s.trust_used = td;
    s.threshold = le.th_new;
    s.classification = le.classification;
    series_.push_back(s);
  }

  // Non-adjacent subjects: learned through gossip only.
  for (const auto& [subject, owners] : r1.gossip) {
    if (subject == r1i) continue;
    if (r1.obs.count(subject)) continue;  // handled above
    bool found = false;
    const double navg = neighbor_average(r1, subject, r1i, found);
    if (!found) continue;
    auto& qe = r1.qtable.entry(subject);
    qe.one_hop = false;
    if (!qe.bootstrapped) {
      qe.q = navg;
      qe.bootstrapped = true;
    } else {
      qe.q = q_update(qe.q, 0.0, navg, lp.alpha, lp.gamma);
    }
    auto& le = r1.ledger[subject];
    le.trust_indirect = navg;
    ledger_apply_window(le, navg);
  }
}

void Simulator::schedule_gossip(std::uint32_t r1i) {
  auto& r1 = rsus_[r1i];
  auto bc = std::make_shared<QTableBroadcast>();
  bc->owner = rsu_id(r1i);
  bc->timestamp = now() - 1e-9;  // tagged with the window just closed
  bc->ttl = static_cast<int>(cfg_.max_hops);
  for (const auto& [subject, entry] : r1.qtable.entries())
    if (entry.one_hop && entry.bootstrapped)
      bc->entries.push_back(QTableEntryMsg{subject, entry.q, true});
  if (bc->entries.empty()) return;
  for (std::uint32_t nb : r1.nbrs) {
    Event d;
    d.action = EventAction::Deliver;
    d.fire_time = now() + propagation_and_tx_delay(
        kCtrlBits, distance(r1.pos, rsus_[nb].pos), cfg_.tx_rate, cfg_.v_prop);
    d.target = rsu_id(nb);
    d.actor = rsu_id(r1i);
    d.payload = std::shared_ptr<const QTableBroadcast>(bc);
    queue_.schedule(d);
  }
}

void Simulator::on_window_end() {
  for (auto& r : rsus_) r.gossip_seen.clear();

  for (std::uint32_t i = 0; i < rsus_.size(); ++i) window_trust_for(i);

  ++windows_completed_;
  const std::uint32_t w = windows_completed_;

  for (std::uint32_t i = 0; i < rsus_.size(); ++i) schedule_gossip(i);

  // Reset per-window observation state.
  for (auto& r : rsus_) {
    for (auto& [subject, o] : r.obs) {
      o.hist.push(o.beacon_count);
      o.beacon_count = 0;
      o.slots.clear();
      o.forwards = 0;
      o.routing.reset(w);
    }
    r.veh_alerts.clear();
    r.rsu_alerts.clear();
    r.est_speed_sum = 0.0;
    r.est_count_sum = 0.0;
    r.est_n = 0;
    r.est_ticks = 0;
  }

  const double next = now() + cfg_.window;
  if (next <= cfg_.sim_duration) {
    Event ev;
    ev.action = EventAction::ObservationWindowEnd;
    ev.fire_time = next;
    queue_.schedule(ev);
  }
}

// ---------------------------------------------------------------- results

void Simulator::finalize(RunResult& out) {
  out.config = cfg_;
  out.seed = cfg_.seed;
  out.rsu_malicious = roles_.rsu_malicious;

  out.verdicts.assign(cfg_.n_rsus, Classification::COMPROMISED);
  for (std::uint32_t m = 0; m < cfg_.n_rsus; ++m) {
    std::uint32_t leg = 0;
    std::uint32_t comp = 0;
    for (std::uint32_t e : rsus_[m].nbrs) {
      auto it = rsus_[e].ledger.find(m);
      if (it == rsus_[e].ledger.end() || !it->second.has_evidence) continue;
      if (it->second.classification == Classification::LEGITIMATE)
        ++leg;
      else
        ++comp;
    }
    out.verdicts[m] = leg > comp ? Classification::LEGITIMATE
                                 : Classification::COMPROMISED;
    const bool malicious = roles_.rsu_malicious[m];
    const bool flagged = out.verdicts[m] == Classification::COMPROMISED;
    if (malicious && flagged) ++out.confusion.tp;
    else if (malicious && !flagged) ++out.confusion.fn;
    else if (!malicious && flagged) ++out.confusion.fp;
    else ++out.confusion.tn;
  }
  out.detection = detection_metrics(out.confusion);

  for (std::uint32_t e = 0; e < cfg_.n_rsus; ++e) {
    for (const auto& [subject, le] : rsus_[e].ledger) {
      if (!le.has_evidence) continue;
      const bool malicious = roles_.rsu_malicious[subject];
      const bool flagged = le.classification == Classification::COMPROMISED;
      if (malicious && flagged) ++out.confusion_per_pair.tp;
      else if (malicious && !flagged) ++out.confusion_per_pair.fn;
      else if (!malicious && flagged) ++out.confusion_per_pair.fp;
      else ++out.confusion_per_pair.tn;
    }
  }

  packets_.in_flight_at_end = packets_.injected - packets_.closed();
  out.packets = packets_;
  out.net_counters = std::move(net_);
  if (cfg_.sim_duration > 0.0)
    out.net_metrics = network_metrics(out.net_counters, cfg_.sim_duration);

  out.trust_series = std::move(series_);
  out.final_ledgers.reserve(rsus_.size());
  for (auto& r : rsus_) out.final_ledgers.push_back(r.ledger);

  out.beacons_sent = beacons_sent_;
  out.alerts_sent = alerts_sent_;
  out.events_processed = events_processed_;
  out.windows_completed = windows_completed_;
}

}  // namespace

RunResult run(const ScenarioConfig& cfg) {
  Simulator sim(cfg);
  return sim.run();
}

}  // namespace vrt
