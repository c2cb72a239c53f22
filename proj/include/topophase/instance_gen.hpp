#pragma once

#include <cstdint>
#include <random>

#include "topophase/capability.hpp"
#include "topophase/phase.hpp"
#include "topophase/world.hpp"

namespace topophase {

// mt19937_64 with hand-rolled value mapping so streams are identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0,1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }

  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

// Valid random world with 2..max_regions regions. Region 0 is always
// habitable with energy access and at least two regions carry demand large
// enough that the default batch floor is satisfiable.
World random_world(Rng& rng, int max_regions);

CapabilityVector random_capability(Rng& rng);

struct OracleCheckResult {
  int instances = 0;
  int identical = 0;      // costs agree within 1e-9 relative
  int within_2pct = 0;    // heuristic within 2% of the oracle
  bool oracle_never_higher = true;
  double max_rel_gap = 0.0;
};

// Runs allocate vs brute_force_allocate over seeded random instances.
OracleCheckResult oracle_check(std::uint64_t seed, int instances, int max_regions,
                               const ModelBundle& model);

}  // namespace topophase
