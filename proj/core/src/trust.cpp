#include "vrt/trust.h"

#include <algorithm>
#include <cmath>

namespace vrt {

std::optional<Weights> frequency_weights(double f_routing, double f_beacon) {
  const double total = f_routing + f_beacon;
  if (total <= 0.0) return std::nullopt;
  Weights w;
  w.w1 = f_routing / total;
  w.w2 = 1.0 - w.w1;
  return w;
}

Weights hiding_correction(const Weights& w, double trust_routing,
                          double trust_beacon, double t_n) {
  const auto cut = [t_n](double b) {
    const double a = 1.0 - b;
    return a * t_n * std::exp(-b * t_n);
  };
  Weights out = w;
  if (trust_beacon < 0.5 && w.w1 >= w.w2) {
    // Routing dominates and would mask a misbehaving beacon signal.
    out.w1 = cut(w.w1);
    out.w2 = 1.0 - out.w1;
  } else if (trust_routing < 0.5 && w.w2 >= w.w1) {
    out.w2 = cut(w.w2);
    out.w1 = 1.0 - out.w2;
  }
  return out;
}

double trust_direct(const Weights& w, double trust_routing, double trust_beacon,
                    int trust_alert) {
  return (w.w1 * trust_routing + w.w2 * trust_beacon) * trust_alert;
}

double direct_trust_window(const DirectTrustInputs& in) {
  const auto w = frequency_weights(in.f_routing, in.f_beacon);
  if (!w) return 0.5 * in.trust_alert;  // no content evidence, alert veto intact
  const Weights corrected =
      hiding_correction(*w, in.trust_routing, in.trust_beacon, in.t_n);
  return trust_direct(corrected, in.trust_routing, in.trust_beacon,
                      in.trust_alert);
}

double q_update(double q_old, double reward, double neighbor_avg, double alpha,
                double gamma) {
  const double q = alpha * q_old * (reward + gamma * neighbor_avg) +
                   (1.0 - alpha) * q_old;
  return std::clamp(q, 0.0, 1.0);
}

double threshold_update(double th_old, double trust_old, double trust_new) {
  const double beta = trust_old - trust_new;
  if (beta > 0.0) return std::clamp(beta + 0.5, 0.5, 1.0);
  if (beta == 0.0) return th_old;
  return 0.5;
}

Classification classify(double trust, double th_new) {
  return trust > th_new ? Classification::LEGITIMATE
                        : Classification::COMPROMISED;
}

void ledger_apply_window(TrustLedgerEntry& e, double trust_value) {
  e.trust_old = e.trust_new;
  e.trust_new = trust_value;
  e.th_old = e.th_new;
  e.th_new = threshold_update(e.th_old, e.trust_old, e.trust_new);
  e.classification = classify(e.trust_new, e.th_new);
  e.has_evidence = true;
  ++e.windows_evaluated;
}

}  // namespace vrt
