#include <doctest.h>

#include "vrt/trust.h"
#include "vrt/watchdog.h"

using namespace vrt;

TEST_CASE("forward ratio scaled by the modification latch") {
  RoutingObservation o;
  o.pf = 7;
  o.pd = 3;
  o.pm = 1;
  CHECK(trust_routing(o) == doctest::Approx(0.7).epsilon(1e-12));

  o.pf = 100;
  o.pd = 0;
  o.pm = 0;
  CHECK(trust_routing(o) == 0.0);

  o.pf = 0;
  o.pd = 0;
  o.pm = 1;
  CHECK(trust_routing(o) == 0.5);  // no-observation neutral
}

TEST_CASE("expected forward time sums transmission, propagation, allowance") {
  CHECK(expected_forward_time(1000.0, 1e6, 0.0, 3e8, 0.0) ==
        doctest::Approx(0.001).epsilon(1e-12));
  // 1000/6e6 + 900/3e8 + 1e-3
  CHECK(expected_forward_time(1000.0, 6e6, 900.0, 3e8, 1e-3) ==
        doctest::Approx(1000.0 / 6e6 + 900.0 / 3e8 + 1e-3).epsilon(1e-12));
}

TEST_CASE("frequency weights") {
  auto w = frequency_weights(30.0, 30.0);
  REQUIRE(w.has_value());
  CHECK(w->w1 == doctest::Approx(0.5));
  CHECK(w->w2 == doctest::Approx(0.5));

  w = frequency_weights(90.0, 10.0);
  REQUIRE(w.has_value());
  CHECK(w->w1 == doctest::Approx(0.9));
  CHECK(w->w2 == doctest::Approx(0.1));

  CHECK_FALSE(frequency_weights(0.0, 0.0).has_value());
}

TEST_CASE("hiding correction cuts the masking factor's weight") {
  // beacon trust low, routing weight dominant: w2 becomes a*e^{-b}
  Weights w = hiding_correction({0.7, 0.3}, 0.9, 0.2, 1.0);
  CHECK(w.w1 == doctest::Approx(0.3 * std::exp(-0.7)).epsilon(1e-9));
  CHECK(w.w1 == doctest::Approx(0.14898).epsilon(1e-4));
  CHECK(w.w2 == doctest::Approx(1.0 - 0.3 * std::exp(-0.7)).epsilon(1e-9));
  CHECK(w.w1 + w.w2 == doctest::Approx(1.0).epsilon(1e-12));

  // neither factor suspicious: unchanged
  w = hiding_correction({0.7, 0.3}, 0.9, 0.6, 1.0);
  CHECK(w.w1 == doctest::Approx(0.7));
  CHECK(w.w2 == doctest::Approx(0.3));

  // routing suspicious instead: the cut lands on w2'
  w = hiding_correction({0.5, 0.5}, 0.4, 0.9, 1.0);
  CHECK(w.w2 == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-9));
  CHECK(w.w2 == doctest::Approx(0.30327).epsilon(1e-4));
  CHECK(w.w1 + w.w2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("direct trust combination and alert veto") {
  CHECK(trust_direct({0.5, 0.5}, 0.8, 0.6, 1) ==
        doctest::Approx(0.7).epsilon(1e-12));
  CHECK(trust_direct({0.5, 0.5}, 0.9, 0.9, 0) == 0.0);
}

TEST_CASE("windowed direct trust degrades to neutral without evidence") {
  DirectTrustInputs in;
  in.f_routing = 0.0;
  in.f_beacon = 0.0;
  in.trust_alert = 1;
  CHECK(direct_trust_window(in) == doctest::Approx(0.5));
  in.trust_alert = 0;
  CHECK(direct_trust_window(in) == 0.0);
}

TEST_CASE("q-value update") {
  CHECK(q_update(0.5, 0.8, 0.6, 0.7, 0.9) ==
        doctest::Approx(0.619).epsilon(1e-12));
  // clamped to [0, 1]
  CHECK(q_update(1.0, 1.0, 1.0, 0.7, 0.9) <= 1.0);
  CHECK(q_update(0.0, 0.0, 0.0, 0.7, 0.9) >= 0.0);
}

TEST_CASE("threshold update branches on the trust delta") {
  CHECK(threshold_update(0.5, 0.8, 0.6) == doctest::Approx(0.7));  // beta > 0
  CHECK(threshold_update(0.65, 0.7, 0.7) == doctest::Approx(0.65));  // beta = 0
  CHECK(threshold_update(0.9, 0.4, 0.7) == doctest::Approx(0.5));  // beta < 0
  // image clamped to [0.5, 1]
  CHECK(threshold_update(0.5, 1.0, 0.1) <= 1.0);
  CHECK(threshold_update(0.5, 0.51, 0.5) >= 0.5);
}

TEST_CASE("classification is strict") {
  CHECK(classify(0.5, 0.5) == Classification::COMPROMISED);
  CHECK(classify(0.50001, 0.5) == Classification::LEGITIMATE);
}

TEST_CASE("ledger window application shifts history and reclassifies") {
  TrustLedgerEntry e;
  ledger_apply_window(e, 0.9);
  CHECK(e.trust_new == doctest::Approx(0.9));
  CHECK(e.trust_old == doctest::Approx(0.5));
  CHECK(e.windows_evaluated == 1);
  CHECK(e.classification == Classification::LEGITIMATE);

  ledger_apply_window(e, 0.2);  // sharp fall raises the threshold
  CHECK(e.trust_old == doctest::Approx(0.9));
  CHECK(e.trust_new == doctest::Approx(0.2));
  CHECK(e.th_new == doctest::Approx(1.0));  // clamp(0.7 + 0.5)
  CHECK(e.classification == Classification::COMPROMISED);
}
