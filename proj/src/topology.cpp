#include "topophase/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "topophase/errors.hpp"
#include "topophase/text.hpp"

namespace topophase {

void validate(const ProductSpec& prod) {
  if (!std::isfinite(prod.price) || !std::isfinite(prod.variable_cost)) {
    throw DomainError("price and variable_cost must be finite");
  }
  if (!(prod.price > prod.variable_cost)) {
    throw DomainError("price must exceed variable cost (mebs undefined otherwise)");
  }
  if (!(prod.facility_fixed >= 0.0) || !(prod.equipment_fixed >= 0.0)) {
    throw DomainError("fixed costs must be >= 0");
  }
  if (prod.n_star && !(*prod.n_star > 0.0)) {
    throw DomainError("explicit n_star must be > 0");
  }
}

double resolve_n_star(const ProductSpec& prod, const World& w) {
  validate(prod);
  if (prod.n_star) return *prod.n_star;
  double best = std::numeric_limits<double>::infinity();
  for (const Region& r : w.regions) {
    if (r.demand > 0.0) best = std::min(best, r.demand);
  }
  if (!std::isfinite(best)) {
    throw DomainError("n_star rule min_metro_demand requires a region with demand > 0");
  }
  return best;
}

double mebs(const CapabilityVector& c, const CostConstants& k, const ProductSpec& prod) {
  validate(prod);
  double numerator = prod.facility_fixed + prod.equipment_fixed +
                     switching_cost(c.gamma, k) + labor_cost(c, k);
  return numerator / (prod.price - prod.variable_cost);
}

std::string_view to_string(Regime r) {
  return r == Regime::Centralized ? "Centralized" : "Distributed";
}

RegimeResult regime(double mebs_value, double n_star) {
  if (!(n_star > 0.0)) throw DomainError("n_star must be > 0");
  if (mebs_value < n_star) return {Regime::Distributed, false};
  return {Regime::Centralized, mebs_value == n_star};
}

double logistics_cost(const World& w,
                      std::span<const std::pair<std::string, std::string>> assignment) {
  std::vector<bool> covered(w.regions.size(), false);
  double total = 0.0;
  for (const auto& [demand_id, facility_id] : assignment) {
    const Region* d = w.find(demand_id);
    const Region* f = w.find(facility_id);
    if (d == nullptr || f == nullptr) {
      throw DomainError("assignment references unknown region id: " +
                        (d == nullptr ? demand_id : facility_id));
    }
    covered[static_cast<size_t>(d - w.regions.data())] = true;
    total += d->demand * w.transport_rate * distance(*d, *f);
  }
  for (size_t i = 0; i < w.regions.size(); ++i) {
    if (w.regions[i].demand > 0.0 && !covered[i]) {
      throw DomainError("assignment does not cover demand region " + w.regions[i].id);
    }
  }
  return total;
}

//---------------------------------------------------------------------------
// allocation solvers
//---------------------------------------------------------------------------

namespace {

// Shared precomputation; the two solvers consume it independently.
struct Instance {
  const World* world = nullptr;
  std::vector<int> cand;            // region indices, ascending id
  std::vector<int> demand_regions;  // region indices with demand > 0, world order
  std::vector<std::vector<double>> dist;  // [demand][candidate]
  std::vector<double> fixed_cost;   // per candidate
  std::vector<double> floor_volume; // per candidate (batch floor)
  double variable_total = 0.0;      // c_var * M
  double total_demand = 0.0;
};

Instance build_instance(const World& w, const CapabilityVector& c,
                        const CostConstants& k, const ProductSpec& prod,
                        const WeightProfile& p, const SurfaceThresholds& t,
                        const McaModel& m, const AllocateOptions& options) {
  validate(c);
  validate(k);
  validate(prod);
  validate(p);
  validate(t);
  validate(m);

  Instance inst;
  inst.world = &w;
  inst.total_demand = w.total_demand();
  if (!(inst.total_demand > 0.0)) {
    throw DomainError("allocation requires total demand > 0");
  }
  inst.variable_total = prod.variable_cost * inst.total_demand;

  std::vector<std::string> feasible = feasible_set(w, c, t);
  if (feasible.empty()) {
    throw InfeasibleError(
        "feasible set is empty: no region offers energy access"
        " plus habitability below the decoupling surface");
  }
  for (const std::string& id : feasible) {
    inst.cand.push_back(static_cast<int>(w.find(id) - w.regions.data()));
  }

  double margin = prod.price - prod.variable_cost;
  double base_fixed = prod.facility_fixed + prod.equipment_fixed +
                      switching_cost(c.gamma, k);
  for (int ci : inst.cand) {
    double labor;
    if (options.couple_phi) {
      CapabilityVector local = c;
      local.rho = effective_reliability(c.rho, w.regions[ci], m);
      labor = labor_cost(local, k);
    } else {
      labor = labor_cost(c, k);
    }
    inst.fixed_cost.push_back(base_fixed + labor);
    inst.floor_volume.push_back((base_fixed + labor) / margin);
  }

  for (size_t i = 0; i < w.regions.size(); ++i) {
    if (w.regions[i].demand > 0.0) inst.demand_regions.push_back(static_cast<int>(i));
  }
  inst.dist.resize(inst.demand_regions.size());
  for (size_t d = 0; d < inst.demand_regions.size(); ++d) {
    inst.dist[d].reserve(inst.cand.size());
    for (int ci : inst.cand) {
      inst.dist[d].push_back(distance(w.regions[inst.demand_regions[d]], w.regions[ci]));
    }
  }

  double min_floor = *std::min_element(inst.floor_volume.begin(), inst.floor_volume.end());
  if (min_floor > inst.total_demand) {
    throw InfeasibleError("no facility subset satisfies the batch floor: mebs " +
                          format_fixed(min_floor) + " exceeds total demand " +
                          format_fixed(inst.total_demand));
  }
  return inst;
}

struct Candidate {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<int> chosen;  // candidate indices, ascending

  bool better_than(const Candidate& other) const {
    if (cost != other.cost) return cost < other.cost;
    return chosen < other.chosen;  // lexicographic facility-set tie rule
  }
};

// Nearest-facility assignment and cost for one chosen subset. Returns
// infinity if any chosen facility misses its volume floor. `assign` and
// `volumes` are caller-provided scratch.
double eval_subset(const Instance& inst, const std::vector<int>& chosen,
                   std::vector<int>& assign, std::vector<double>& volumes) {
  volumes.assign(chosen.size(), 0.0);
  double logistics = 0.0;
  for (size_t d = 0; d < inst.demand_regions.size(); ++d) {
    int best = 0;
    double best_dist = inst.dist[d][chosen[0]];
    for (size_t j = 1; j < chosen.size(); ++j) {
      double dd = inst.dist[d][chosen[j]];
      if (dd < best_dist) {  // ties keep the smaller candidate index (= id)
        best_dist = dd;
        best = static_cast<int>(j);
      }
    }
    assign[d] = chosen[best];
    double demand = inst.world->regions[inst.demand_regions[d]].demand;
    volumes[best] += demand;
    logistics += demand * inst.world->transport_rate * best_dist;
  }

  double fixed = 0.0;
  for (size_t j = 0; j < chosen.size(); ++j) {
    if (volumes[j] < inst.floor_volume[chosen[j]]) {
      return std::numeric_limits<double>::infinity();
    }
    fixed += inst.fixed_cost[chosen[j]];
  }
  return fixed + inst.variable_total + logistics;
}

Allocation package(const Instance& inst, const Candidate& best) {
  const World& w = *inst.world;
  std::vector<int> assign(inst.demand_regions.size());
  std::vector<double> volumes;
  eval_subset(inst, best.chosen, assign, volumes);

  Allocation out;
  out.total_cost = best.cost;
  out.outputs.assign(w.regions.size(), 0.0);
  for (size_t j = 0; j < best.chosen.size(); ++j) {
    int region_index = inst.cand[best.chosen[j]];
    out.facilities.push_back({w.regions[region_index].id, volumes[j]});
    out.outputs[region_index] = volumes[j];
  }
  for (size_t d = 0; d < inst.demand_regions.size(); ++d) {
    out.assignment.emplace_back(w.regions[inst.demand_regions[d]].id,
                                w.regions[inst.cand[assign[d]]].id);
  }
  return out;
}

Candidate exact_scan(const Instance& inst, bool parallel) {
  int n = static_cast<int>(inst.cand.size());
  long mask_count = (1L << n) - 1;

#ifdef _OPENMP
  int max_threads = parallel ? omp_get_max_threads() : 1;
#else
  int max_threads = 1;
  (void)parallel;
#endif
  std::vector<Candidate> per_thread(static_cast<size_t>(max_threads));

#ifdef _OPENMP
#pragma omp parallel num_threads(max_threads) if (parallel)
#endif
  {
#ifdef _OPENMP
    int tid = omp_get_thread_num();
#else
    int tid = 0;
#endif
    Candidate local;
    std::vector<int> chosen;
    chosen.reserve(n);
    std::vector<int> assign(inst.demand_regions.size());
    std::vector<double> volumes;

#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (long mask = 1; mask <= mask_count; ++mask) {
      chosen.clear();
      for (int b = 0; b < n; ++b) {
        if ((mask >> b) & 1L) chosen.push_back(b);
      }
      double cost = eval_subset(inst, chosen, assign, volumes);
      if (std::isfinite(cost)) {
        Candidate trial{cost, chosen};
        if (trial.better_than(local)) local = std::move(trial);
      }
    }
    per_thread[static_cast<size_t>(tid)] = std::move(local);
  }

  Candidate best;
  for (Candidate& c : per_thread) {
    if (c.better_than(best)) best = std::move(c);
  }
  return best;
}

Candidate greedy_local_search(const Instance& inst) {
  int n = static_cast<int>(inst.cand.size());
  std::vector<int> assign(inst.demand_regions.size());
  std::vector<double> volumes;

  auto evaluate = [&](const std::vector<int>& chosen) {
    return eval_subset(inst, chosen, assign, volumes);
  };

  // Greedy seed: best single facility (total demand always meets the floor
  // of at least one candidate; build_instance checked that).
  Candidate current;
  for (int i = 0; i < n; ++i) {
    std::vector<int> single{i};
    double cost = evaluate(single);
    Candidate trial{cost, single};
    if (std::isfinite(cost) && trial.better_than(current)) current = std::move(trial);
  }

  // Greedy add phase.
  bool improved = true;
  while (improved) {
    improved = false;
    Candidate best_add = current;
    for (int j = 0; j < n; ++j) {
      if (std::binary_search(current.chosen.begin(), current.chosen.end(), j)) continue;
      std::vector<int> trial_set = current.chosen;
      trial_set.insert(std::upper_bound(trial_set.begin(), trial_set.end(), j), j);
      double cost = evaluate(trial_set);
      Candidate trial{cost, std::move(trial_set)};
      if (std::isfinite(cost) && trial.better_than(best_add)) best_add = std::move(trial);
    }
    if (best_add.cost < current.cost) {
      current = std::move(best_add);
      improved = true;
    }
  }

  // Add/drop/swap local search to a local optimum.
  improved = true;
  while (improved) {
    improved = false;
    Candidate best_move = current;

    auto consider = [&](std::vector<int> trial_set) {
      double cost = evaluate(trial_set);
      Candidate trial{cost, std::move(trial_set)};
      if (std::isfinite(cost) && trial.better_than(best_move)) best_move = std::move(trial);
    };

    for (int j = 0; j < n; ++j) {
      bool member = std::binary_search(current.chosen.begin(), current.chosen.end(), j);
      if (!member) {
        std::vector<int> added = current.chosen;
        added.insert(std::upper_bound(added.begin(), added.end(), j), j);
        consider(std::move(added));
      } else if (current.chosen.size() > 1) {
        std::vector<int> dropped;
        for (int v : current.chosen) {
          if (v != j) dropped.push_back(v);
        }
        consider(std::move(dropped));
      }
    }
    for (int out : current.chosen) {
      for (int in = 0; in < n; ++in) {
        if (std::binary_search(current.chosen.begin(), current.chosen.end(), in)) continue;
        std::vector<int> swapped;
        for (int v : current.chosen) {
          if (v != out) swapped.push_back(v);
        }
        swapped.insert(std::upper_bound(swapped.begin(), swapped.end(), in), in);
        consider(std::move(swapped));
      }
    }

    if (best_move.cost < current.cost) {
      current = std::move(best_move);
      improved = true;
    }
  }
  return current;
}

}  // namespace

Allocation allocate(const World& w, const CapabilityVector& c, const CostConstants& k,
                    const ProductSpec& prod, const WeightProfile& p,
                    const SurfaceThresholds& t, const McaModel& m,
                    const AllocateOptions& options) {
  Instance inst = build_instance(w, c, k, prod, p, t, m, options);
  Candidate best;
  if (static_cast<int>(inst.cand.size()) <= options.exact_limit) {
    best = exact_scan(inst, options.parallel);
  } else {
    best = greedy_local_search(inst);
  }
  if (!std::isfinite(best.cost)) {
    throw InfeasibleError("no facility subset satisfies the batch floor over " +
                          std::to_string(inst.cand.size()) + " feasible candidates");
  }
  return package(inst, best);
}

Allocation brute_force_allocate(const World& w, const CapabilityVector& c,
                                const CostConstants& k, const ProductSpec& prod,
                                const WeightProfile& p, const SurfaceThresholds& t,
                                const McaModel& m, const AllocateOptions& options) {
  Instance inst = build_instance(w, c, k, prod, p, t, m, options);
  int n = static_cast<int>(inst.cand.size());
  if (n > 15) {
    throw DomainError("brute force guard: " + std::to_string(n) +
                      " candidates exceed the limit of 15");
  }

  // Plain recursive enumeration, deliberately separate from the scan in
  // allocate(): this is the oracle side of the pair.
  Candidate best;
  std::vector<int> chosen;
  std::vector<double> volumes(static_cast<size_t>(n), 0.0);

  auto consider = [&]() {
    if (chosen.empty()) return;
    std::fill(volumes.begin(), volumes.end(), 0.0);
    double logistics = 0.0;
    for (size_t d = 0; d < inst.demand_regions.size(); ++d) {
      int nearest = chosen.front();
      for (int ci : chosen) {
        if (inst.dist[d][ci] < inst.dist[d][nearest]) nearest = ci;
      }
      double demand = inst.world->regions[inst.demand_regions[d]].demand;
      volumes[nearest] += demand;
      logistics += demand * inst.world->transport_rate * inst.dist[d][nearest];
    }
    double fixed = 0.0;
    for (int ci : chosen) {
      if (volumes[ci] < inst.floor_volume[ci]) return;
      fixed += inst.fixed_cost[ci];
    }
    Candidate trial{fixed + inst.variable_total + logistics, chosen};
    if (trial.better_than(best)) best = std::move(trial);
  };

  auto recurse = [&](auto&& self, int next) -> void {
    if (next == n) {
      consider();
      return;
    }
    chosen.push_back(next);
    self(self, next + 1);
    chosen.pop_back();
    self(self, next + 1);
  };
  recurse(recurse, 0);

  if (!std::isfinite(best.cost)) {
    throw InfeasibleError("no facility subset satisfies the batch floor over " +
                          std::to_string(n) + " feasible candidates");
  }
  return package(inst, best);
}

}  // namespace topophase
