#include "vrt/adversary.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vrt {

std::uint32_t RoleMap::malicious_rsus() const {
  return static_cast<std::uint32_t>(
      std::count(rsu_malicious.begin(), rsu_malicious.end(), true));
}

std::uint32_t RoleMap::malicious_vehicles() const {
  return static_cast<std::uint32_t>(
      std::count(vehicle_malicious.begin(), vehicle_malicious.end(), true));
}

namespace {

std::vector<bool> pick(Rng& rng, std::uint32_t n, double fraction) {
  const auto k = static_cast<std::uint32_t>(
      std::llround(fraction * static_cast<double>(n)));
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0u);
  // Partial Fisher-Yates: the first k slots are the malicious picks.
  for (std::uint32_t i = 0; i < k && i < n; ++i) {
    const auto j = i + static_cast<std::uint32_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<bool> out(n, false);
  for (std::uint32_t i = 0; i < k && i < n; ++i) out[idx[i]] = true;
  return out;
}

}  // namespace

RoleMap assign_roles(Rng& rng, std::uint32_t n_rsus, std::uint32_t n_vehicles,
                     double mr, double mv) {
  RoleMap roles;
  roles.rsu_malicious = pick(rng, n_rsus, mr);
  roles.vehicle_malicious = pick(rng, n_vehicles, mv);
  return roles;
}

RelayAction rsu_on_relay(const AdversaryProfile& profile, Rng& rng) {
  if (rng.bernoulli(profile.rsu_drop_p)) return RelayAction::DROP;
  if (rng.bernoulli(profile.rsu_modify_p)) return RelayAction::FORWARD_MODIFIED;
  return RelayAction::FORWARD;
}

BeaconTickPlan rsu_on_beacon_tick(const AdversaryProfile& profile, Rng& rng) {
  BeaconTickPlan plan;
  if (rng.bernoulli(profile.rsu_flood_p))
    plan.burst = static_cast<std::uint32_t>(
        std::max(1.0, std::round(profile.flood_burst_factor)));
  plan.falsify = rng.bernoulli(profile.rsu_beacon_falsify_p);
  return plan;
}

VehicleAlertAction vehicle_on_relay_alert(double p, Rng& rng) {
  if (!rng.bernoulli(p)) return VehicleAlertAction::PASS;
  return rng.bernoulli(0.5) ? VehicleAlertAction::DROP
                            : VehicleAlertAction::FLIP;
}

}  // namespace vrt
