#include "vrt/results_io.h"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace vrt {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  const bool needs_quoting =
      field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quoting) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::map<std::string, std::optional<double>> run_metrics(const RunResult& r) {
  std::map<std::string, std::optional<double>> m;
  m["fpr"] = r.detection.fpr;
  m["fnr"] = r.detection.fnr;
  m["precision"] = r.detection.precision;
  m["recall"] = r.detection.recall;
  m["accuracy"] = r.detection.accuracy;
  m["pdr"] = r.net_metrics.pdr;
  m["throughput_pps"] = r.net_metrics.throughput_pps;
  m["throughput_bps"] = r.net_metrics.throughput_bps;
  m["ae2e_delay"] = r.net_metrics.ae2e_delay;
  return m;
}

namespace {

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

}  // namespace

std::string run_result_json(const RunResult& r) {
  nlohmann::ordered_json j;
  j["seed"] = r.seed;
  j["protocol"] = to_string(r.config.protocol);
  j["trust_filter"] = r.config.trust_filter;
  j["mr"] = r.config.adversary.mr;
  j["mv"] = r.config.adversary.mv;
  j["windows_completed"] = r.windows_completed;

  nlohmann::ordered_json conf;
  conf["tp"] = r.confusion.tp;
  conf["fp"] = r.confusion.fp;
  conf["tn"] = r.confusion.tn;
  conf["fn"] = r.confusion.fn;
  j["confusion"] = conf;

  nlohmann::ordered_json det;
  det["fpr"] = optional_json(r.detection.fpr);
  det["fnr"] = optional_json(r.detection.fnr);
  det["precision"] = optional_json(r.detection.precision);
  det["recall"] = optional_json(r.detection.recall);
  det["accuracy"] = optional_json(r.detection.accuracy);
  j["detection"] = det;

  nlohmann::ordered_json net;
  net["pdr"] = optional_json(r.net_metrics.pdr);
  net["throughput_pps"] = optional_json(r.net_metrics.throughput_pps);
  net["throughput_bps"] = optional_json(r.net_metrics.throughput_bps);
  net["ae2e_delay"] = optional_json(r.net_metrics.ae2e_delay);
  j["network"] = net;

  nlohmann::ordered_json pk;
  pk["injected"] = r.packets.injected;
  pk["delivered"] = r.packets.delivered;
  pk["delivered_modified"] = r.packets.delivered_modified;
  pk["dropped_by_malice"] = r.packets.dropped_by_malice;
  pk["dropped_no_route"] = r.packets.dropped_no_route;
  pk["dropped_hop_limit"] = r.packets.dropped_hop_limit;
  pk["in_flight_at_end"] = r.packets.in_flight_at_end;
  j["packets"] = pk;

  nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.verdicts.size(); ++i) {
    nlohmann::ordered_json v;
    v["rsu"] = i;
    v["malicious"] = static_cast<bool>(r.rsu_malicious[i]);
    v["verdict"] = r.verdicts[i] == Classification::COMPROMISED
                       ? "compromised"
                       : "legitimate";
    verdicts.push_back(v);
  }
  j["verdicts"] = verdicts;

  j["beacons_sent"] = r.beacons_sent;
  j["alerts_sent"] = r.alerts_sent;
  j["events_processed"] = r.events_processed;
  return j.dump(2) + "\n";
}

namespace {

const char* kSweepColumns =
    "mr,mv,protocol,filter,metric,mean,stderr,ci95_lo,ci95_hi,n_seeds,seed_hash";

std::string row_values(const SweepRow& row, char sep) {
  std::ostringstream os;
  os << format_double(row.point.mr) << sep << format_double(row.point.mv)
     << sep << to_string(row.point.protocol) << sep
     << (row.point.trust_filter ? "1" : "0") << sep << csv_escape(row.metric)
     << sep << format_double(row.agg.mean) << sep
     << format_double(row.agg.stderr_) << sep << format_double(row.agg.ci95_lo)
     << sep << format_double(row.agg.ci95_hi) << sep << row.agg.n << sep
     << row.seed_hash;
  return os.str();
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << kSweepColumns << "\r\n";
  for (const auto& row : rows) os << row_values(row, ',') << "\r\n";
  return os.str();
}

std::string sweep_jsonl(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  for (const auto& row : rows) {
    nlohmann::ordered_json j;
    j["mr"] = row.point.mr;
    j["mv"] = row.point.mv;
    j["protocol"] = to_string(row.point.protocol);
    j["filter"] = row.point.trust_filter;
    j["metric"] = row.metric;
    j["mean"] = row.agg.mean;
    j["stderr"] = row.agg.stderr_;
    j["ci95_lo"] = row.agg.ci95_lo;
    j["ci95_hi"] = row.agg.ci95_hi;
    j["n_seeds"] = row.agg.n;
    j["seed_hash"] = row.seed_hash;
    os << j.dump() << "\n";
  }
  return os.str();
}

}  // namespace vrt
