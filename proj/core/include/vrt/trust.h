#ifndef VRT_TRUST_H
#define VRT_TRUST_H

#include <cstdint>
#include <map>
#include <optional>
#include <utility>

#include "vrt/geometry.h"

namespace vrt {

enum class Classification : std::uint8_t { LEGITIMATE, COMPROMISED };

inline constexpr double kInitialTrust = 0.5;
inline constexpr double kInitialThreshold = 0.5;

struct LearningParams {
  double alpha = 0.7;
  double gamma = 0.9;
};

struct Weights {
  double w1 = 0.5;  // routing
  double w2 = 0.5;  // beacon
};

// w1 = F_routing / (F_routing + F_beacon), w2 = 1 - w1.
// Both frequencies zero has no defined weights; callers fall back to the
// neutral content trust (see direct_trust_window).
std::optional<Weights> frequency_weights(double f_routing, double f_beacon);

// Cuts the weight of a trust factor that would hide the malicious signal
// carried by the other factor. t_n is the normalized window length
// (window / default window; 1 by default).
Weights hiding_correction(const Weights& w, double trust_routing,
                          double trust_beacon, double t_n = 1.0);

// (w1 * routing + w2 * beacon) * alert.
double trust_direct(const Weights& w, double trust_routing, double trust_beacon,
                    int trust_alert);

struct DirectTrustInputs {
  double trust_routing = 0.5;
  double trust_beacon = 0.5;
  int trust_alert = 1;
  double f_routing = 0.0;
  double f_beacon = 0.0;
  double t_n = 1.0;
};

// Full per-window combination: frequency weights, hiding correction, and
// the alert veto. Both-frequencies-zero degrades to 0.5 * alert.
double direct_trust_window(const DirectTrustInputs& in);

// Q-value update for one subject; clamped to [0, 1].
double q_update(double q_old, double reward, double neighbor_avg, double alpha,
                double gamma);

// Threshold adjustment from consecutive trust values; image is [0.5, 1].
double threshold_update(double th_old, double trust_old, double trust_new);

// Legitimate iff trust is strictly above the threshold.
Classification classify(double trust, double th_new);

struct QTableEntry {
  double q = 0.0;
  bool one_hop = false;
  bool bootstrapped = false;
};

// Q-table of one evaluator; entries exist only for RSUs within the hop
// budget of the gossip flood.
class QTable {
 public:
  QTableEntry& entry(std::uint32_t subject) { return entries_[subject]; }
  const std::map<std::uint32_t, QTableEntry>& entries() const { return entries_; }
  bool contains(std::uint32_t subject) const { return entries_.count(subject) != 0; }

 private:
  std::map<std::uint32_t, QTableEntry> entries_;
};

struct TrustLedgerEntry {
  double trust_direct = kInitialTrust;
  double trust_indirect = 0.0;
  double trust_old = kInitialTrust;
  double trust_new = kInitialTrust;
  double th_old = kInitialThreshold;
  double th_new = kInitialThreshold;
  Classification classification = Classification::COMPROMISED;
  bool has_evidence = false;  // at least one evaluated window / gossip bootstrap
  std::uint32_t windows_evaluated = 0;
};

// Applies one window's trust value: shifts old/new, adjusts the threshold,
// reclassifies.
void ledger_apply_window(TrustLedgerEntry& e, double trust_value);

using TrustLedger = std::map<std::uint32_t, TrustLedgerEntry>;  // by RSU index

}  // namespace vrt

#endif
