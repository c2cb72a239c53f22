#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topophase/capability.hpp"
#include "topophase/world.hpp"

namespace topophase {

struct McaModel;  // mca.hpp

// Baseline weights in factor order (labor, logistics, land, energy,
// market_distance, regulatory); must be >= 0 and sum to 1 within 1e-9.
struct WeightProfile {
  std::array<double, kFactorCount> baseline{};
  double w_phi = 0.0;  // climate-penalty weight for the autonomous objective
};

void validate(const WeightProfile& p);

// Capability-adjusted weights; still sum to 1.
struct EffectiveWeights {
  std::array<double, kFactorCount> w{};
};

inline constexpr int kLaborIndex = 0;
inline constexpr int kMarketIndex = 4;

// w_L(c) = w_L0 * (1 - delta*rho*h(gamma,tau)); in [0, w_L0].
double labor_weight(const CapabilityVector& c, const WeightProfile& p);

// Mass freed from the labor weight is redistributed across the other five
// factors in proportion to their baseline shares.
EffectiveWeights effective_weights(const CapabilityVector& c, const WeightProfile& p);

// Weighted factor-cost sum; lower is better.
double site_objective(const Region& r, const EffectiveWeights& w);

// Adds the machine-climate penalty w_phi * (1 - phi).
double site_objective_mca(const Region& r, const EffectiveWeights& w, double phi,
                          const WeightProfile& p);

// Attractiveness under baseline (labor-era) weighting; higher is better.
double traditional_score(const Region& r, const WeightProfile& p);

enum class SiteMode { Classic, Mca };

struct SiteRanking {
  std::string region_id;
  double score = 0.0;
  double phi = 1.0;  // adaptation factor; 1 in classic mode
};

// All regions scored and sorted ascending by score, ties by id. First
// entry is the argmin. Mca mode requires a model.
std::vector<SiteRanking> select_site(const World& w, const CapabilityVector& c,
                                     const WeightProfile& p, SiteMode mode,
                                     const McaModel* mca = nullptr);

// Region ids (sorted) not dominated on the chosen factors.
std::vector<std::string> pareto_set(const World& w,
                                    std::span<const std::string> factor_names);

using CapabilityPath = std::function<CapabilityVector(double)>;

// Straight-line path c(t) = from + t * (to - from), t in [0,1].
CapabilityPath linear_path(const CapabilityVector& from, const CapabilityVector& to);

// Root of w_L(c(t)) - w_M(c(t)) on [0,1]: 64-sample sign scan, then
// bisection to |interval| <= tol. The scan also rejects paths that are not
// componentwise nondecreasing. Returns nullopt when the sign is constant.
std::optional<double> find_weight_inversion(const CapabilityPath& path,
                                            const WeightProfile& p,
                                            double tol = 1e-6);

}  // namespace topophase
