#include <doctest.h>

#include "vrt/results_io.h"
#include "vrt/simulation.h"
#include "vrt/sweep.h"

using namespace vrt;

namespace {

ScenarioConfig quick_config() {
  ScenarioConfig cfg = desk_scale_config();
  cfg.sim_duration = 180.0;  // 3 windows
  return cfg;
}

}  // namespace

TEST_CASE("message delay sums transmission and propagation") {
  CHECK(propagation_and_tx_delay(4096.0, 900.0, 6e6, 3e8) ==
        doctest::Approx(4096.0 / 6e6 + 900.0 / 3e8).epsilon(1e-12));
}

TEST_CASE("identical config and seed give byte-identical results") {
  ScenarioConfig cfg = quick_config();
  cfg.adversary.mr = 0.4;
  cfg.adversary.mv = 0.2;
  cfg.seed = 77;
  const RunResult a = run(cfg);
  const RunResult b = run(cfg);
  CHECK(run_result_json(a) == run_result_json(b));
}

TEST_CASE("packet accounting balances") {
  ScenarioConfig cfg = quick_config();
  cfg.adversary.mr = 0.4;
  cfg.adversary.mv = 0.2;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    cfg.seed = seed;
    const RunResult r = run(cfg);
    CHECK(r.packets.injected ==
          r.packets.closed() + r.packets.in_flight_at_end);
    CHECK(r.packets.delivered_modified <= r.packets.delivered);
    CHECK(r.net_counters.packets_received == r.packets.delivered);
  }
}

TEST_CASE("zero duration yields empty counters and initial trust") {
  ScenarioConfig cfg = desk_scale_config();
  cfg.sim_duration = 0.0;
  const RunResult r = run(cfg);
  CHECK(r.packets.injected == 0);
  CHECK(r.windows_completed == 0);
  CHECK(r.trust_series.empty());
  for (const auto& ledger : r.final_ledgers)
    for (const auto& [subject, e] : ledger) {
      CHECK(e.trust_new == kInitialTrust);
      CHECK_FALSE(e.has_evidence);
    }
}

TEST_CASE("all-honest run raises every direct trust and flags nobody") {
  ScenarioConfig cfg = desk_scale_config();
  cfg.sim_duration = 360.0;  // 6 windows
  cfg.seed = 5;
  const RunResult r = run(cfg);
  CHECK(r.confusion.fp == 0);
  CHECK(r.confusion.tn == cfg.n_rsus);
  for (const auto& v : r.verdicts) CHECK(v == Classification::LEGITIMATE);
  for (const auto& s : r.trust_series)
    if (s.window >= 5) CHECK(s.trust_direct >= 0.9);
}

TEST_CASE("an always-dropping RSU is flagged within two windows") {
  ScenarioConfig cfg = quick_config();
  cfg.adversary.mr = 0.25;  // 2 of 9 RSUs
  cfg.adversary.mv = 0.0;
  cfg.adversary.rsu_drop_p = 1.0;
  cfg.adversary.rsu_modify_p = 0.0;
  cfg.adversary.rsu_flood_p = 0.0;
  cfg.adversary.rsu_beacon_falsify_p = 0.0;
  cfg.adversary.rsu_alert_alter_p = 0.0;
  cfg.seed = 9;
  const RunResult r = run(cfg);
  for (std::uint32_t s = 0; s < cfg.n_rsus; ++s) {
    if (!r.rsu_malicious[s]) continue;
    bool flagged_by_window_2 = false;
    for (const auto& ts : r.trust_series)
      if (ts.subject == s && ts.window <= 1 &&
          ts.classification == Classification::COMPROMISED)
        flagged_by_window_2 = true;
    CHECK(flagged_by_window_2);
  }
  CHECK(r.confusion.fn == 0);
}

TEST_CASE("sweep aggregates one row per metric and cell") {
  ScenarioConfig base = quick_config();
  SweepSpec spec;
  spec.base = base;
  spec.mr_values = {0.0, 0.4};
  spec.mv_values = {0.2};
  spec.variants = {{RoutingProtocol::Reactive, false}};
  spec.seeds = {1, 2};
  const auto rows = run_sweep(spec);
  // every (cell, metric) appears once; undefined metrics are skipped
  for (const auto& row : rows) {
    CHECK(row.agg.n <= 2);
    CHECK(row.agg.n >= 1);
    CHECK(row.seed_hash == seed_list_hash({2, 1}));
  }
  const std::string csv = sweep_csv(rows);
  CHECK(csv.find("\r\n") != std::string::npos);
  CHECK(sweep_csv(rows) == csv);  // deterministic serialization
}

TEST_CASE("run result json is stable and carries the confusion counts") {
  ScenarioConfig cfg = quick_config();
  cfg.seed = 3;
  const RunResult r = run(cfg);
  const std::string j = run_result_json(r);
  CHECK(j.find("\"confusion\"") != std::string::npos);
  CHECK(j.find("\"seed\": 3") != std::string::npos);
}
