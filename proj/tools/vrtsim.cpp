// Command-line front end: run single scenarios, parameter sweeps, config
// validation, and closed-form oracle evaluations.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vrt/beacon_trust.h"
#include "vrt/config.h"
#include "vrt/results_io.h"
#include "vrt/simulation.h"
#include "vrt/sweep.h"
#include "vrt/trust.h"
#include "vrt/watchdog.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

vrt::ScenarioConfig load_config(const std::string& path, std::uint64_t seed,
                                bool seed_given) {
  vrt::ScenarioConfig cfg =
      path.empty() ? vrt::desk_scale_config() : vrt::parse_config(read_file(path));
  if (seed_given) cfg.seed = seed;
  return cfg;
}

// --out is resolved against VRTSIM_OUT_DIR when it is a bare relative path.
std::filesystem::path resolve_out(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("VRTSIM_OUT_DIR"); dir && *dir)
      return std::filesystem::path(dir) / p;
  }
  return p;
}

void write_output(const std::string& out, const std::string& content) {
  if (out.empty()) {
    std::cout << content;
    return;
  }
  const auto path = resolve_out(out);
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write: " + path.string());
  f << content;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

vrt::RoutingProtocol protocol_from(const std::string& name) {
  if (name == "reactive") return vrt::RoutingProtocol::Reactive;
  if (name == "proactive_ls") return vrt::RoutingProtocol::ProactiveLS;
  if (name == "proactive_dv") return vrt::RoutingProtocol::ProactiveDV;
  throw std::runtime_error("unknown protocol: " + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge VANET trust simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 1;
  bool seed_given = false;

  auto add_common = [&](CLI::App* sub, bool with_format) {
    sub->add_option("--config", config_path, "scenario config file");
    sub->add_option("--out", out_path,
                    "output file (default stdout; bare relative paths are "
                    "placed under $VRTSIM_OUT_DIR)");
    sub->add_option("--seed", seed, "master seed override")
        ->each([&](const std::string&) { seed_given = true; });
    if (with_format)
      sub->add_option("--format", format, "csv or jsonl")
          ->check(CLI::IsMember({"csv", "jsonl"}));
  };

  // ---- run ----
  auto* cmd_run = app.add_subcommand("run", "run one scenario, emit JSON");
  add_common(cmd_run, false);
  cmd_run->callback([&] {
    const auto cfg = load_config(config_path, seed, seed_given);
    const vrt::RunResult r = vrt::run(cfg);
    write_output(out_path, vrt::run_result_json(r));
  });

  // ---- sweep ----
  auto* cmd_sweep = app.add_subcommand("sweep", "grid sweep, emit CSV/JSONL");
  std::string mr_csv = "0";
  std::string mv_csv = "0";
  std::vector<std::string> variant_strs;
  std::uint32_t n_seeds = 0;
  add_common(cmd_sweep, true);
  cmd_sweep->add_option("--mr", mr_csv, "malicious RSU fractions, comma list");
  cmd_sweep->add_option("--mv", mv_csv,
                        "malicious vehicle fractions, comma list");
  cmd_sweep->add_option(
      "--variant", variant_strs,
      "protocol[:filtered] variant, repeatable (e.g. reactive:1)");
  cmd_sweep->add_option("--seeds", n_seeds,
                        "number of seeds (default config iterations)");
  cmd_sweep->callback([&] {
    vrt::SweepSpec spec;
    spec.base = load_config(config_path, seed, seed_given);
    spec.mr_values = parse_doubles(mr_csv);
    spec.mv_values = parse_doubles(mv_csv);
    spec.variants.clear();
    for (const auto& v : variant_strs) {
      const auto colon = v.find(':');
      const std::string proto = v.substr(0, colon);
      const bool filtered =
          colon != std::string::npos && v.substr(colon + 1) == "1";
      spec.variants.push_back({protocol_from(proto), filtered});
    }
    const std::uint32_t count = n_seeds ? n_seeds : spec.base.iterations;
    spec.seeds.clear();
    for (std::uint32_t i = 0; i < count; ++i)
      spec.seeds.push_back(spec.base.seed + i);
    const auto rows = vrt::run_sweep(spec);
    write_output(out_path, format == "jsonl" ? vrt::sweep_jsonl(rows)
                                             : vrt::sweep_csv(rows));
  });

  // ---- validate ----
  auto* cmd_val = app.add_subcommand("validate", "check a config file");
  add_common(cmd_val, false);
  cmd_val->callback([&] {
    if (config_path.empty())
      throw CLI::ValidationError("validate requires --config");
    try {
      const auto cfg = vrt::parse_config(read_file(config_path));
      (void)cfg;
      std::cout << "ok\n";
    } catch (const std::runtime_error& e) {
      std::cerr << e.what() << "\n";
      std::exit(2);
    }
  });

  // ---- oracle ----
  auto* cmd_oracle =
      app.add_subcommand("oracle", "evaluate one closed-form trust formula");
  std::string formula;
  std::vector<double> args;
  cmd_oracle->add_option("formula", formula,
                         "routing|beacon-avg|expected-forward|hiding|direct|"
                         "q-update|threshold")
      ->required();
  cmd_oracle->add_option("args", args, "formula arguments")->expected(-1);
  cmd_oracle->callback([&] {
    auto need = [&](std::size_t n) {
      if (args.size() != n)
        throw CLI::ValidationError("formula expects " + std::to_string(n) +
                                   " arguments");
    };
    double value = 0.0;
    if (formula == "routing") {
      need(3);  // pf pd pm
      vrt::RoutingObservation o;
      o.pf = static_cast<std::uint32_t>(args[0]);
      o.pd = static_cast<std::uint32_t>(args[1]);
      o.pm = static_cast<int>(args[2]);
      value = vrt::trust_routing(o);
    } else if (formula == "beacon-avg") {
      if (args.empty()) throw CLI::ValidationError("needs slot counts");
      vrt::BeaconRateHistory h(static_cast<std::uint32_t>(args.size()));
      for (double a : args) h.push(static_cast<std::uint32_t>(a));
      value = h.weighted_average();
    } else if (formula == "expected-forward") {
      need(5);  // bits rate dist v_prop t_other
      value = vrt::expected_forward_time(args[0], args[1], args[2], args[3],
                                         args[4]);
    } else if (formula == "hiding") {
      need(4);  // w1 routing beacon t_n
      const vrt::Weights w =
          vrt::hiding_correction({args[0], 1.0 - args[0]}, args[1], args[2],
                                 args[3]);
      value = w.w1;
    } else if (formula == "direct") {
      need(4);  // w1 routing beacon alert
      value = vrt::trust_direct({args[0], 1.0 - args[0]}, args[1], args[2],
                                static_cast<int>(args[3]));
    } else if (formula == "q-update") {
      need(5);  // q_old reward neighbor_avg alpha gamma
      value = vrt::q_update(args[0], args[1], args[2], args[3], args[4]);
    } else if (formula == "threshold") {
      need(3);  // th_old trust_old trust_new
      value = vrt::threshold_update(args[0], args[1], args[2]);
    } else {
      throw CLI::ValidationError("unknown formula: " + formula);
    }
    std::cout << vrt::format_double(value) << "\n";
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}
