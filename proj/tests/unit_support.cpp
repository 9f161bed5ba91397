#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "vrt/config.h"
#include "vrt/digest.h"
#include "vrt/event_queue.h"
#include "vrt/geometry.h"
#include "vrt/ground_truth.h"
#include "vrt/metrics.h"
#include "vrt/mobility.h"
#include "vrt/results_io.h"
#include "vrt/rng.h"

using namespace vrt;

TEST_CASE("range check is inclusive at the boundary") {
  CHECK(in_range({0, 0}, {0, 0}, 250.0));
  CHECK(in_range({0, 0}, {900.0, 0}, 900.0));
  CHECK_FALSE(in_range({0, 0}, {900.1, 0}, 900.0));
}

TEST_CASE("one-hop neighbors on a 5x5 grid") {
  const auto positions = rsu_grid_positions(25, 900.0, 14000.0);
  std::vector<TopologyEntry> topo;
  for (std::uint32_t i = 0; i < positions.size(); ++i)
    topo.push_back({rsu_id(i), positions[i]});

  // corner RSU: exactly 2 axis-aligned neighbors (diagonal is 1272.8 m)
  const auto corner = one_hop_neighbors(rsu_id(0), topo, 900.0, NodeKind::RSU);
  CHECK(corner.size() == 2);

  // center RSU (index 12): 4 neighbors
  const auto center = one_hop_neighbors(rsu_id(12), topo, 900.0, NodeKind::RSU);
  CHECK(center.size() == 4);

  CHECK_THROWS_AS(one_hop_neighbors(rsu_id(99), topo, 900.0, NodeKind::RSU),
                  std::invalid_argument);
}

TEST_CASE("packet digest covers the payload only") {
  DataPacket p;
  p.immutable_payload = {1, 2, 3, 4};
  p.mutable_header = {9, 9};
  p.hop_count = 0;
  const auto d0 = packet_digest(p);
  p.hop_count = 5;
  p.mutable_header = {1};
  CHECK(packet_digest(p) == d0);  // header and hop count excluded
  p.immutable_payload[0] ^= 1;
  CHECK(packet_digest(p) != d0);
  CHECK(packet_digest(p) == packet_digest(p));
}

TEST_CASE("rng streams are deterministic and independent") {
  Rng a1(42, RngStream::Mobility), a2(42, RngStream::Mobility);
  Rng b(42, RngStream::Adversary);
  for (int i = 0; i < 100; ++i) CHECK(a1.uniform_u64() == a2.uniform_u64());
  // different stream, same master seed: different sequence
  Rng a3(42, RngStream::Mobility);
  bool any_diff = false;
  for (int i = 0; i < 100; ++i)
    if (a3.uniform_u64() != b.uniform_u64()) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("event queue pops in time order with FIFO tiebreak") {
  EventQueue q;
  Event a;
  a.fire_time = 5.0;
  a.key = 1;
  Event b = a;
  b.key = 2;
  Event c;
  c.fire_time = 2.0;
  c.key = 3;
  q.schedule(a);
  q.schedule(b);
  q.schedule(c);
  CHECK(q.pop().key == 3);
  CHECK(q.pop().key == 1);  // same-time events pop in insertion order
  CHECK(q.pop().key == 2);
  CHECK(q.clock() == 5.0);

  Event past;
  past.fire_time = 1.0;
  CHECK_THROWS_AS(q.schedule(past), std::invalid_argument);
}

TEST_CASE("mobility keeps vehicles on the road grid at constant speed") {
  RoadGrid grid{4, 900.0, 450.0};
  Rng rng(7, RngStream::Mobility);
  MobilityModel m(grid, 20.0, 50, rng);
  for (int t = 0; t < 200; ++t) m.tick(1.0, rng);
  for (const auto& v : m.vehicles()) {
    CHECK(v.speed() == doctest::Approx(20.0).epsilon(1e-9));
    // on-road: at least one coordinate sits on a grid line
    const double fx = std::abs(
        std::remainder(v.pos.x - grid.origin, grid.spacing));
    const double fy = std::abs(
        std::remainder(v.pos.y - grid.origin, grid.spacing));
    CHECK(std::min(fx, fy) < 1e-6);
    CHECK(v.pos.x > grid.origin - 1e-6);
    CHECK(v.pos.x < grid.origin + grid.extent() + 1e-6);
  }
}

TEST_CASE("ground-truth traffic estimate") {
  std::vector<VehicleSnapshot> vs = {{{0.0, 0.0}, 10.0},
                                     {{50.0, 0.0}, 30.0},
                                     {{5000.0, 0.0}, 99.0}};
  const auto est = GroundTruth::traffic_around({0, 0}, 100.0, 2.0, vs);
  CHECK(est.samples == 2);
  CHECK(est.speed == doctest::Approx(20.0));
  CHECK(est.density == doctest::Approx(1.0));  // 2 vehicles / 2 km
}

TEST_CASE("detection metrics with undefined-on-zero semantics") {
  const auto m = detection_metrics({11, 2, 11, 1});
  REQUIRE(m.recall.has_value());
  CHECK(*m.recall == doctest::Approx(11.0 / 12.0).epsilon(1e-9));
  CHECK(*m.precision == doctest::Approx(11.0 / 13.0).epsilon(1e-9));
  CHECK(*m.accuracy == doctest::Approx(0.88).epsilon(1e-9));
  CHECK(*m.fpr == doctest::Approx(2.0 / 13.0).epsilon(1e-9));
  CHECK(*m.fnr == doctest::Approx(1.0 / 12.0).epsilon(1e-9));

  const auto z = detection_metrics({0, 0, 0, 0});
  CHECK_FALSE(z.fpr.has_value());
  CHECK_FALSE(z.fnr.has_value());
  CHECK_FALSE(z.precision.has_value());
  CHECK_FALSE(z.recall.has_value());
  CHECK_FALSE(z.accuracy.has_value());
}

TEST_CASE("network metrics") {
  NetworkCounters c;
  c.packets_sent = 100;
  c.packets_received = 80;
  c.bytes_received = 80 * 512;
  c.latencies.assign(80, 0.25);
  const auto m = network_metrics(c, 10.0);
  CHECK(*m.pdr == doctest::Approx(0.8));
  CHECK(*m.throughput_pps == doctest::Approx(8.0));
  CHECK(*m.throughput_bps == doctest::Approx(80 * 512 * 8 / 10.0));
  CHECK(*m.ae2e_delay == doctest::Approx(0.25));

  NetworkCounters empty;
  const auto zm = network_metrics(empty, 10.0);
  CHECK_FALSE(zm.pdr.has_value());
  CHECK_FALSE(zm.ae2e_delay.has_value());
}

TEST_CASE("rank correlation and sign test") {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const std::vector<double> inc = {2, 4, 5, 7, 9};
  const std::vector<double> dec = {9, 7, 5, 4, 2};
  CHECK(spearman(x, inc) == doctest::Approx(1.0));
  CHECK(spearman(x, dec) == doctest::Approx(-1.0));
  const std::vector<double> flat = {1, 1, 1, 1, 1};
  CHECK(spearman(x, flat) == 0.0);

  // 10 positive diffs: p = 2^-10
  std::vector<double> diffs(10, 0.5);
  CHECK(sign_test_p(diffs) == doctest::Approx(1.0 / 1024.0).epsilon(1e-9));
  diffs[0] = -0.5;
  CHECK(sign_test_p(diffs) == doctest::Approx(11.0 / 1024.0).epsilon(1e-9));
}

TEST_CASE("config round-trips through emit and parse") {
  ScenarioConfig cfg = desk_scale_config();
  cfg.adversary.mr = 0.4;
  cfg.adversary.mv = 0.15;
  cfg.protocol = RoutingProtocol::ProactiveDV;
  cfg.trust_filter = true;
  cfg.seed = 987654321;
  const ScenarioConfig back = parse_config(emit_config(cfg));
  CHECK(emit_config(back) == emit_config(cfg));
}

TEST_CASE("empty config text yields all defaults") {
  const ScenarioConfig cfg = parse_config("");
  CHECK(cfg.n_rsus == 25);
  CHECK(cfg.n_vehicles == 500);
  CHECK(cfg.area_side == 14000.0);
  CHECK(cfg.sim_duration == 1200.0);
  CHECK(cfg.rsu_range == 900.0);
}

TEST_CASE("config errors are collected, not thrown one at a time") {
  const std::string bad =
      "[scenario]\nn_rsus = -3\nvehicle_speed = abc\nnosuchkey = 1\n";
  try {
    parse_config(bad);
    FAIL("expected parse failure");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("n_rsus") != std::string::npos);
    CHECK(msg.find("vehicle_speed") != std::string::npos);
    CHECK(msg.find("nosuchkey") != std::string::npos);
  }
}

TEST_CASE("csv fields are quoted per RFC 4180") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");
}

TEST_CASE("desk preset is a valid config") {
  const ScenarioConfig cfg = desk_scale_config();
  CHECK(validate_config(cfg).empty());
  CHECK(cfg.n_rsus == 9);
  CHECK(cfg.n_vehicles == 120);
}
