#include <doctest.h>

#include <set>
#include <stdexcept>

#include "vrt/adversary.h"
#include "vrt/beacon_trust.h"
#include "vrt/digest.h"
#include "vrt/geometry.h"
#include "vrt/routing.h"
#include "vrt/watchdog.h"

using namespace vrt;

namespace {

// side x side grid backbone with 4-neighborhood adjacency.
Backbone grid_backbone(std::uint32_t side) {
  Backbone bb;
  bb.adj.resize(side * side);
  auto at = [side](std::uint32_t x, std::uint32_t y) { return y * side + x; };
  for (std::uint32_t y = 0; y < side; ++y)
    for (std::uint32_t x = 0; x < side; ++x) {
      if (x + 1 < side) {
        bb.adj[at(x, y)].push_back(at(x + 1, y));
        bb.adj[at(x + 1, y)].push_back(at(x, y));
      }
      if (y + 1 < side) {
        bb.adj[at(x, y)].push_back(at(x, y + 1));
        bb.adj[at(x, y + 1)].push_back(at(x, y));
      }
    }
  return bb;
}

DataPacket mk_packet(std::uint64_t id) {
  DataPacket p;
  p.id = id;
  p.immutable_payload = {1, 2, 3, 4, 5};
  return p;
}

}  // namespace

TEST_CASE("shortest path on the grid honors exclusions") {
  const Backbone bb = grid_backbone(3);
  auto p = shortest_path(bb, 0, 8);
  REQUIRE(p.has_value());
  CHECK(p->size() == 5);  // 4 hops
  CHECK(p->front() == 0);
  CHECK(p->back() == 8);

  // exclude the center: a detour of equal length exists
  auto q = shortest_path(bb, 0, 8, [](std::uint32_t n) { return n == 4; });
  REQUIRE(q.has_value());
  CHECK(q->size() == 5);
  for (std::uint32_t n : *q) CHECK(n != 4);

  // src and dst are never excluded
  auto r = shortest_path(bb, 0, 1, [](std::uint32_t) { return true; });
  REQUIRE(r.has_value());
  CHECK(r->size() == 2);

  // cut off the destination entirely
  auto cut = shortest_path(bb, 0, 8,
                           [](std::uint32_t n) { return n == 5 || n == 7; });
  CHECK_FALSE(cut.has_value());
}

TEST_CASE("mpr selection covers the strict 2-hop neighborhood") {
  const Backbone bb = grid_backbone(4);
  for (std::uint32_t node = 0; node < bb.size(); ++node) {
    const auto mprs = mpr_select(bb, node);
    std::set<std::uint32_t> one_hop(bb.adj[node].begin(), bb.adj[node].end());
    std::set<std::uint32_t> covered;
    for (std::uint32_t m : mprs)
      for (std::uint32_t n2 : bb.adj[m]) covered.insert(n2);
    for (std::uint32_t n1 : one_hop)
      for (std::uint32_t n2 : bb.adj[n1]) {
        if (n2 == node || one_hop.count(n2)) continue;
        CHECK(covered.count(n2) == 1);
      }
  }
}

TEST_CASE("reactive routing caches and invalidates") {
  const Backbone bb = grid_backbone(3);
  ReactiveRouting rr(bb);
  auto r1 = rr.route(0, 8, false, nullptr);
  REQUIRE(r1.has_value());
  CHECK(r1->fresh);
  auto r2 = rr.route(0, 8, false, nullptr);
  REQUIRE(r2.has_value());
  CHECK_FALSE(r2->fresh);  // served from cache
  CHECK(r2->path == r1->path);

  rr.invalidate_through(r1->path[1]);
  auto r3 = rr.route(0, 8, false, nullptr);
  REQUIRE(r3.has_value());
  CHECK(r3->fresh);  // cache was dropped

  // filtered discovery avoids excluded relays
  const ExcludeFn excl = [](std::uint32_t, std::uint32_t s) { return s == 4; };
  auto rf = rr.route(0, 8, true, excl);
  REQUIRE(rf.has_value());
  for (std::uint32_t n : rf->path) CHECK(n != 4);
}

TEST_CASE("link-state tables match shortest hop counts") {
  const Backbone bb = grid_backbone(3);
  LinkStateRouting ls(bb);
  CHECK_FALSE(ls.ready(0));
  CHECK(ls.next_hop(0, 8) == -1);  // unavailable before first update
  ls.update_all(false, nullptr);
  CHECK(ls.ready(0));
  for (std::uint32_t s = 0; s < bb.size(); ++s)
    for (std::uint32_t d = 0; d < bb.size(); ++d) {
      if (s == d) continue;
      // walk the next-hop chain and compare with the oracle
      std::uint32_t cur = s;
      std::uint32_t hops = 0;
      while (cur != d && hops <= bb.size()) {
        const std::int32_t nh = ls.next_hop(cur, d);
        REQUIRE(nh >= 0);
        cur = static_cast<std::uint32_t>(nh);
        ++hops;
      }
      const auto oracle = shortest_path(bb, s, d);
      REQUIRE(oracle.has_value());
      CHECK(hops == oracle->size() - 1);
    }
}

TEST_CASE("distance vector converges within diameter rounds") {
  const Backbone bb = grid_backbone(3);
  DistanceVectorRouting dv(bb, 6);
  CHECK(dv.next_hop(0, 8) == -1);
  for (int i = 0; i < 4; ++i) dv.round(false, nullptr);  // diameter = 4
  for (std::uint32_t s = 0; s < bb.size(); ++s)
    for (std::uint32_t d = 0; d < bb.size(); ++d) {
      if (s == d) continue;
      const auto oracle = shortest_path(bb, s, d);
      CHECK(dv.metric(s, d) == oracle->size() - 1);
    }
}

TEST_CASE("role assignment flags the rounded fractions deterministically") {
  Rng rng(5, RngStream::Roles);
  const RoleMap roles = assign_roles(rng, 25, 500, 0.6, 0.2);
  CHECK(roles.malicious_rsus() == 15);
  CHECK(roles.malicious_vehicles() == 100);

  Rng rng2(5, RngStream::Roles);
  const RoleMap again = assign_roles(rng2, 25, 500, 0.6, 0.2);
  CHECK(roles.rsu_malicious == again.rsu_malicious);
  CHECK(roles.vehicle_malicious == again.vehicle_malicious);
}

TEST_CASE("relay decision frequencies match the profile") {
  AdversaryProfile prof;  // drop 0.5, modify 0.5
  Rng rng(11, RngStream::Adversary);
  int drops = 0, modified = 0, forwards = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    switch (rsu_on_relay(prof, rng)) {
      case RelayAction::DROP: ++drops; break;
      case RelayAction::FORWARD_MODIFIED: ++modified; ++forwards; break;
      case RelayAction::FORWARD: ++forwards; break;
    }
  }
  CHECK(std::abs(drops / double(n) - 0.5) < 0.02);
  CHECK(std::abs(modified / double(forwards) - 0.5) < 0.02);
}

TEST_CASE("flooding plan exceeds the honest weighted average within a window") {
  AdversaryProfile prof;
  prof.rsu_flood_p = 1.0;
  prof.flood_burst_factor = 5.0;
  Rng rng(3, RngStream::Adversary);
  BeaconRateHistory hist(5);
  for (int i = 0; i < 5; ++i) hist.push(60);  // honest 1 Hz, 60 s windows
  std::uint32_t emitted = 0;
  for (int t = 0; t < 60; ++t) emitted += rsu_on_beacon_tick(prof, rng).burst;
  CHECK(flooding_check(hist, emitted));
}

TEST_CASE("watchdog buffer lifecycle") {
  WatchdogBuffer wb;
  RoutingObservation obs;
  obs.reset(1);
  DataPacket p = mk_packet(100);
  wb.on_forward_to_next_hop(p, rsu_id(2), 10.0, 0.01);
  CHECK(wb.contains(100));
  CHECK_THROWS_AS(wb.on_forward_to_next_hop(p, rsu_id(2), 10.0, 0.01),
                  std::invalid_argument);

  // intact overhear from the right forwarder: PF increment, entry gone
  CHECK(wb.on_overhear(p, rsu_id(2), 10.005, obs));
  CHECK(obs.pf == 1);
  CHECK(obs.pm == 1);
  CHECK_FALSE(wb.contains(100));

  // modified payload: PM latch zeroed, PF unchanged
  wb.on_forward_to_next_hop(p, rsu_id(2), 11.0, 0.01);
  DataPacket tampered = p;
  tampered.immutable_payload[0] ^= 0xFF;
  CHECK(wb.on_overhear(tampered, rsu_id(2), 11.005, obs));
  CHECK(obs.pf == 1);
  CHECK(obs.pm == 0);

  // header/hop changes alone keep the digest intact
  wb.on_forward_to_next_hop(p, rsu_id(2), 12.0, 0.01);
  DataPacket rehopped = p;
  rehopped.hop_count = 3;
  rehopped.mutable_header = {7};
  CHECK(wb.on_overhear(rehopped, rsu_id(2), 12.005, obs));
  CHECK(obs.pf == 2);

  // timeout counts a drop once
  wb.on_forward_to_next_hop(p, rsu_id(2), 13.0, 0.01);
  CHECK(wb.on_timeout(100, 13.02, obs));
  CHECK(obs.pd == 1);
  CHECK_FALSE(wb.on_timeout(100, 13.03, obs));
  CHECK(obs.pd == 1);

  // cancel removes without counting
  wb.on_forward_to_next_hop(p, rsu_id(2), 14.0, 0.01);
  wb.cancel(100);
  CHECK_FALSE(wb.on_timeout(100, 14.02, obs));
  CHECK(obs.pd == 1);
}

TEST_CASE("overhear from the wrong forwarder does not consume the entry") {
  WatchdogBuffer wb;
  RoutingObservation obs;
  obs.reset(1);
  DataPacket p = mk_packet(7);
  wb.on_forward_to_next_hop(p, rsu_id(2), 1.0, 0.01);
  CHECK_FALSE(wb.on_overhear(p, rsu_id(3), 1.005, obs));
  CHECK(wb.contains(7));
  CHECK(obs.pf == 0);
}
