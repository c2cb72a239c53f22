#include "topophase/instance_gen.hpp"

#include <cmath>
#include <cstdio>

#include "topophase/topology.hpp"

namespace topophase {

World random_world(Rng& rng, int max_regions) {
  World w;
  int count = rng.uniform_int(2, max_regions);
  w.transport_rate = rng.uniform(0.001, 0.05);
  for (int i = 0; i < count; ++i) {
    Region r;
    char id[8];
    std::snprintf(id, sizeof(id), "r%02d", i);
    r.id = id;
    r.name = "Region " + std::to_string(i);
    r.x_km = rng.uniform(0.0, 1000.0);
    r.y_km = rng.uniform(0.0, 1000.0);
    r.factors.labor = rng.uniform(0.0, 10.0);
    r.factors.logistics = rng.uniform(0.0, 10.0);
    r.factors.land = rng.uniform(0.0, 10.0);
    r.factors.energy = rng.uniform(0.0, 10.0);
    r.factors.market_distance = rng.uniform(0.0, 10.0);
    r.factors.regulatory = rng.uniform(0.0, 10.0);
    r.environment.humidity = rng.uniform(5.0, 95.0);
    r.environment.dust = rng.uniform(0.0, 2.0);
    r.environment.thermal_cycling = rng.uniform(0.0, 1.0);
    r.environment.irradiance = rng.uniform(800.0, 2800.0);
    r.environment.precipitation_days = rng.uniform(0.0, 250.0);
    r.habitable = i == 0 || rng.chance(0.8);
    r.energy_access = i == 0 || rng.chance(0.9);
    // Demand floor keeps every instance feasible under the default cost
    // constants (worst-case batch floor is ~2075 units).
    r.demand = i < 2 ? rng.uniform(2200.0, 6000.0)
                     : (rng.chance(0.7) ? rng.uniform(2200.0, 6000.0) : 0.0);
    w.regions.push_back(std::move(r));
  }
  return w;
}

CapabilityVector random_capability(Rng& rng) {
  CapabilityVector c;
  c.delta = rng.uniform();
  c.gamma = rng.uniform();
  c.rho = rng.uniform();
  c.tau = rng.uniform();
  return c;
}

OracleCheckResult oracle_check(std::uint64_t seed, int instances, int max_regions,
                               const ModelBundle& model) {
  Rng rng(seed);
  OracleCheckResult result;
  result.instances = instances;
  for (int i = 0; i < instances; ++i) {
    World w = random_world(rng, max_regions);
    CapabilityVector c = random_capability(rng);
    Allocation fast = allocate(w, c, model.cost_constants, model.product, model.weights,
                               model.thresholds, model.mca_model, model.alloc_options);
    Allocation exact =
        brute_force_allocate(w, c, model.cost_constants, model.product, model.weights,
                             model.thresholds, model.mca_model, model.alloc_options);

    double scale = std::max(1.0, std::fabs(exact.total_cost));
    double gap = (fast.total_cost - exact.total_cost) / scale;
    if (gap < -1e-9) result.oracle_never_higher = false;
    result.max_rel_gap = std::max(result.max_rel_gap, gap);
    if (std::fabs(gap) <= 1e-9) ++result.identical;
    if (gap <= 0.02) ++result.within_2pct;
  }
  return result;
}

}  // namespace topophase
