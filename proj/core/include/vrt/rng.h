#ifndef VRT_RNG_H
#define VRT_RNG_H

#include <cstdint>
#include <random>

namespace vrt {

// Named, independently seeded random streams derived from one master seed.
// Keeping adversary draws on their own stream means toggling adversary
// features does not perturb mobility or traffic randomness between runs.
enum class RngStream : std::uint32_t {
  Mobility = 1,
  Adversary = 2,
  Traffic = 3,
  Events = 4,
  Sensors = 5,
  Roles = 6,
};

std::uint64_t splitmix64(std::uint64_t& state);

class Rng {
 public:
  Rng(std::uint64_t master_seed, RngStream stream);

  std::mt19937_64& engine() { return engine_; }

  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  std::uint64_t uniform_u64();
  // Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p);

 private:
  std::mt19937_64 engine_;
};

}  // namespace vrt

#endif
