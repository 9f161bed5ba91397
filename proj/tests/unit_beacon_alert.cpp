#include <doctest.h>

#include "vrt/alert_trust.h"
#include "vrt/beacon_trust.h"

using namespace vrt;

TEST_CASE("beacon-rate weighted average and flooding verdict") {
  BeaconRateHistory h(3);
  h.push(2);
  h.push(4);
  h.push(6);
  CHECK(h.weighted_average() == doctest::Approx(9.0 + 1.0 / 3.0).epsilon(1e-12));
  CHECK(flooding_check(h, 10));       // 10 > 9.333
  CHECK_FALSE(flooding_check(h, 9));  // 9 <= 9.333

  BeaconRateHistory cold(5);  // zero-padded before warm-up
  CHECK(cold.weighted_average() == 0.0);
  CHECK(flooding_check(cold, 1));
}

TEST_CASE("speed/density verification uses relative tolerance") {
  CHECK(verify_speed_density({20.0, 10.0}, {20.0, 10.0}, 0.1));
  CHECK_FALSE(verify_speed_density({20.0, 10.0}, {23.0, 10.0}, 0.1));  // 15%
  CHECK(verify_speed_density({20.0, 10.0}, {20.0, 10.5}, 0.1));       // 5%
  // abstain without samples from the claimed area
  CHECK(verify_speed_density({0.0, 0.0}, {99.0, 99.0}, 0.1, false));
}

TEST_CASE("vehicle sensor check emits an ignore alert past the tolerance") {
  Beacon b;
  b.sender = rsu_id(3);
  b.position = {100.0, 200.0};
  b.timestamp = 17.0;
  b.seq = 42;
  b.temperature = 25.0;
  b.humidity = 60.0;
  b.carbon_level = 480.0;

  Environment sensed;  // carbon 400: 20% discrepancy
  auto alert = vehicle_sensor_check(sensed, b, b.position, 0.1, 18.0,
                                    vehicle_id(7));
  REQUIRE(alert.has_value());
  CHECK(alert->event_type == EventType::IGNORE_RSU);
  CHECK(alert->event_value == 0);
  CHECK(alert->location == b.position);
  CHECK(alert->timestamp == 18.0);
  CHECK(alert->event_key == b.seq);

  // exactly at the threshold: strict inequality, no alert
  b.carbon_level = 440.0;  // discrepancy exactly 0.1
  CHECK_FALSE(vehicle_sensor_check(sensed, b, b.position, 0.1, 18.0,
                                   vehicle_id(7))
                  .has_value());
}

TEST_CASE("relay re-verification of ignore alerts") {
  Beacon b;
  b.carbon_level = 480.0;
  b.temperature = 25.0;
  b.humidity = 60.0;
  TrafficAlert a;
  a.event_type = EventType::IGNORE_RSU;
  a.event_value = 0;

  Environment own;  // carbon 400, confirms the discrepancy
  CHECK(relay_ignore_alert(a, b, own, 0.1) == RelayDecision::FORWARD);

  Beacon honest = b;
  honest.carbon_level = 400.0;
  CHECK(relay_ignore_alert(a, honest, own, 0.1) == RelayDecision::DROP);

  // relay never saw the beacon: forward unmodified
  CHECK(relay_ignore_alert(a, std::nullopt, own, 0.1) ==
        RelayDecision::FORWARD);
}

TEST_CASE("per-beacon verdict combines both stages") {
  // no alerts, stage 1 fine, 7 adjacent vehicles
  BeaconVerdict v = beacon_verdict(true, 0, 0, 7);
  CHECK(v.beacon_bit == 1);
  CHECK(v.x == 7);

  // 5 reporting vehicles, 4 negative: majority rejection
  v = beacon_verdict(true, 4, 5, 7);
  CHECK(v.beacon_bit == 0);
  CHECK(v.x == 5);

  // stage-1 failure short-circuits regardless of alerts
  v = beacon_verdict(false, 0, 5, 7);
  CHECK(v.beacon_bit == 0);
  CHECK(v.x == 7);

  // minority accusation does not flip the verdict
  v = beacon_verdict(true, 2, 5, 7);
  CHECK(v.beacon_bit == 1);
}

TEST_CASE("beacon trust is the X-weighted acceptance rate") {
  std::vector<BeaconVerdict> verdicts;
  verdicts.push_back({1, 0, 3});
  verdicts.push_back({2, 1, 7});
  CHECK(trust_beacon(verdicts) == doctest::Approx(0.7).epsilon(1e-12));

  for (auto& v : verdicts) v.beacon_bit = 1;
  CHECK(trust_beacon(verdicts) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(trust_beacon({}) == 0.5);  // no verdicts: neutral
}

TEST_CASE("event-alert relay rule") {
  // plurality forwarding
  RelayOutcome r = vehicle_relay_event_alert({1, 1, 1, 0}, false, 0);
  CHECK(r.forward);
  CHECK(r.event_value == 1);

  // tie: drop
  CHECK_FALSE(vehicle_relay_event_alert({1, 1, 0, 0}, false, 0).forward);

  // observers always forward their own sensed value
  r = vehicle_relay_event_alert({0, 0, 0}, true, 1);
  CHECK(r.forward);
  CHECK(r.event_value == 1);
}

namespace {

TrafficAlert mk_alert(NodeId sender, double ts, int value,
                      Position loc = {0.0, 0.0}) {
  TrafficAlert a;
  a.sender_id = sender;
  a.timestamp = ts;
  a.event_value = value;
  a.location = loc;
  a.event_type = EventType::ACCIDENT;
  return a;
}

}  // namespace

TEST_CASE("per-event alert trust bit") {
  const double t_h = 5.0;
  TrafficAlert rsu = mk_alert(rsu_id(2), 10.0, 1);

  // 3 vehicle alerts, 2 matching: Y=2 > N=1
  std::vector<TrafficAlert> vs = {mk_alert(vehicle_id(0), 9.0, 1),
                                  mk_alert(vehicle_id(1), 9.5, 1),
                                  mk_alert(vehicle_id(2), 9.0, 0)};
  CHECK(trust_alert(rsu, vs, t_h) == 1);

  // 4 alerts, 2 matching: Y=2 is not strictly greater than N=2
  vs.push_back(mk_alert(vehicle_id(3), 9.2, 0));
  CHECK(trust_alert(rsu, vs, t_h) == 0);

  // RSU alert with zero vehicle alerts: strict inequality fails
  CHECK(trust_alert(rsu, {}, t_h) == 0);

  // neither side alerted: no event occurred
  CHECK(trust_alert(std::nullopt, {}, t_h) == 1);

  // RSU silent while vehicles alerted: suppression
  CHECK(trust_alert(std::nullopt, {mk_alert(vehicle_id(0), 9.0, 1)}, t_h) == 0);

  // timestamp criterion is one-sided: a vehicle alert far in the future
  // still satisfies rsu.ts - veh.ts <= t_h
  std::vector<TrafficAlert> late = {mk_alert(vehicle_id(0), 500.0, 1),
                                    mk_alert(vehicle_id(1), 501.0, 1)};
  CHECK(trust_alert(rsu, late, t_h) == 1);
  // but an old vehicle alert beyond t_h does not match
  std::vector<TrafficAlert> old = {mk_alert(vehicle_id(0), 1.0, 1)};
  CHECK(trust_alert(rsu, old, t_h) == 0);
}

TEST_CASE("alert locations compare within a radius") {
  CHECK(same_alert_location({0.0, 0.0}, {3.0, 4.0}));
  CHECK_FALSE(same_alert_location({0.0, 0.0}, {30.0, 40.0}));
}
