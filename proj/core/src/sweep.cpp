#include "vrt/sweep.h"

#include <algorithm>
#include <map>
#include <optional>

#include "vrt/results_io.h"

namespace vrt {

std::uint64_t seed_list_hash(const std::vector<std::uint64_t>& seeds) {
  auto sorted = seeds;
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint64_t s : sorted) {
    for (int i = 0; i < 8; ++i) {
      h ^= (s >> (8 * i)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::vector<SweepRow> run_sweep(
    const SweepSpec& spec,
    const std::function<void(const SweepPoint&, const RunResult&)>& observer) {
  std::vector<std::pair<RoutingProtocol, bool>> variants = spec.variants;
  if (variants.empty())
    variants.push_back({spec.base.protocol, spec.base.trust_filter});

  std::vector<SweepRow> rows;
  for (double mr : spec.mr_values) {
    for (double mv : spec.mv_values) {
      for (const auto& [protocol, filter] : variants) {
        SweepPoint point{mr, mv, protocol, filter};
        // metric -> defined samples (one per seed where defined).
        std::map<std::string, std::vector<double>> samples;
        for (std::uint64_t seed : spec.seeds) {
          ScenarioConfig cfg = spec.base;
          cfg.adversary.mr = mr;
          cfg.adversary.mv = mv;
          cfg.protocol = protocol;
          cfg.trust_filter = filter;
          cfg.seed = seed;
          const RunResult r = run(cfg);
          if (observer) observer(point, r);
          for (const auto& [name, value] : run_metrics(r))
            if (value) samples[name].push_back(*value);
        }
        const std::uint64_t shash = seed_list_hash(spec.seeds);
        for (const auto& [name, vals] : samples) {
          SweepRow row;
          row.point = point;
          row.metric = name;
          row.agg = aggregate(vals);
          row.seed_hash = shash;
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

}  // namespace vrt
