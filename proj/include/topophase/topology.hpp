#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "topophase/capability.hpp"
#include "topophase/mca.hpp"
#include "topophase/siteselect.hpp"
#include "topophase/world.hpp"

namespace topophase {

struct ProductSpec {
  double price = 0.0;
  double variable_cost = 0.0;
  double facility_fixed = 0.0;
  double equipment_fixed = 0.0;
  // Explicit threshold volume; nullopt means "min_metro_demand" (the
  // smallest positive regional demand in the world).
  std::optional<double> n_star;
};

void validate(const ProductSpec& prod);

// Resolves the centralized/distributed threshold N* against a world.
double resolve_n_star(const ProductSpec& prod, const World& w);

// Minimum economic batch size: amortized fixed block over unit margin.
double mebs(const CapabilityVector& c, const CostConstants& k, const ProductSpec& prod);

enum class Regime { Centralized, Distributed };

std::string_view to_string(Regime r);

struct RegimeResult {
  Regime regime = Regime::Centralized;
  bool on_boundary = false;  // mebs == n_star exactly
};

// Distributed iff mebs < n_star; the boundary counts as centralized.
RegimeResult regime(double mebs_value, double n_star);

// Transport cost of an assignment: sum over demand regions of
// demand * transport_rate * distance(region, facility).
double logistics_cost(const World& w,
                      std::span<const std::pair<std::string, std::string>> assignment);

struct FacilityLoad {
  std::string region_id;
  double volume = 0.0;
};

struct Allocation {
  std::vector<FacilityLoad> facilities;  // ascending region id
  // (demand region id, serving facility id), world order, demand > 0 only.
  std::vector<std::pair<std::string, std::string>> assignment;
  std::vector<double> outputs;  // m_r aligned with world.regions
  double total_cost = 0.0;
};

struct AllocateOptions {
  // Couple the adaptation factor into the supervision term: facilities use
  // rho_eff at their own site, and the batch floor follows per site.
  bool couple_phi = false;
  // Exhaustive subset scan up to this candidate count, local search above.
  int exact_limit = 12;
  bool parallel = true;
};

// Picks a facility subset of the feasible set and assigns every demand
// region to its nearest facility, minimizing fixed + variable + logistics
// cost subject to each facility carrying at least one economic batch.
// Deterministic: cost ties break on the lexicographically smaller facility
// set; distance ties on the lexicographically smaller facility id.
Allocation allocate(const World& w, const CapabilityVector& c, const CostConstants& k,
                    const ProductSpec& prod, const WeightProfile& p,
                    const SurfaceThresholds& t, const McaModel& m,
                    const AllocateOptions& options = {});

// Independent exhaustive reference: every nonempty facility subset, same
// floor and tie rules. Guarded to at most 15 candidates.
Allocation brute_force_allocate(const World& w, const CapabilityVector& c,
                                const CostConstants& k, const ProductSpec& prod,
                                const WeightProfile& p, const SurfaceThresholds& t,
                                const McaModel& m, const AllocateOptions& options = {});

}  // namespace topophase
