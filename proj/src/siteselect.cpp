#include "topophase/siteselect.hpp"

#include <algorithm>
#include <cmath>

#include "topophase/errors.hpp"
#include "topophase/mca.hpp"

namespace topophase {

void validate(const WeightProfile& p) {
  double sum = 0.0;
  for (double w : p.baseline) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ConfigError("baseline weights must be finite and >= 0");
    }
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw ConfigError("baseline weights must sum to 1, got " + std::to_string(sum));
  }
  if (!(p.w_phi >= 0.0) || !std::isfinite(p.w_phi)) {
    throw ConfigError("w_phi must be finite and >= 0");
  }
}

double labor_weight(const CapabilityVector& c, const WeightProfile& p) {
  validate(c);
  validate(p);
  double h = fusion_factor(c.gamma, c.tau);
  return p.baseline[kLaborIndex] * (1.0 - c.delta * c.rho * h);
}

EffectiveWeights effective_weights(const CapabilityVector& c, const WeightProfile& p) {
  double wl = labor_weight(c, p);
  double freed = p.baseline[kLaborIndex] - wl;

  double others = 0.0;
  for (int i = 0; i < kFactorCount; ++i) {
    if (i != kLaborIndex) others += p.baseline[i];
  }
  if (others <= 0.0 && freed > 0.0) {
    throw ConfigError("cannot redistribute freed labor weight: all non-labor baselines are zero");
  }

  EffectiveWeights out;
  out.w[kLaborIndex] = wl;
  for (int i = 0; i < kFactorCount; ++i) {
    if (i == kLaborIndex) continue;
    out.w[i] = p.baseline[i] + (others > 0.0 ? freed * (p.baseline[i] / others) : 0.0);
  }
  return out;
}

double site_objective(const Region& r, const EffectiveWeights& w) {
  double total = 0.0;
  for (int i = 0; i < kFactorCount; ++i) {
    total += w.w[i] * factor_value(r.factors, i);
  }
  return total;
}

double site_objective_mca(const Region& r, const EffectiveWeights& w, double phi,
                          const WeightProfile& p) {
  if (!(phi > 0.0 && phi <= 1.0)) {
    throw DomainError("phi must lie in (0,1], got " + std::to_string(phi));
  }
  return site_objective(r, w) + p.w_phi * (1.0 - phi);
}

double traditional_score(const Region& r, const WeightProfile& p) {
  validate(p);
  EffectiveWeights base;
  base.w = p.baseline;
  return -site_objective(r, base);
}

std::vector<SiteRanking> select_site(const World& w, const CapabilityVector& c,
                                     const WeightProfile& p, SiteMode mode,
                                     const McaModel* mca) {
  if (w.regions.empty()) throw DomainError("select_site requires a nonempty world");
  if (mode == SiteMode::Mca && mca == nullptr) {
    throw DomainError("mca mode requires an environmental response model");
  }

  EffectiveWeights eff = effective_weights(c, p);
  std::vector<SiteRanking> out;
  out.reserve(w.regions.size());
  for (const Region& r : w.regions) {
    SiteRanking entry;
    entry.region_id = r.id;
    if (mode == SiteMode::Mca) {
      entry.phi = adaptation_factor(r, *mca);
      entry.score = site_objective_mca(r, eff, entry.phi, p);
    } else {
      entry.score = site_objective(r, eff);
    }
    out.push_back(std::move(entry));
  }
  std::sort(out.begin(), out.end(), [](const SiteRanking& a, const SiteRanking& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.region_id < b.region_id;
  });
  return out;
}

namespace {

int factor_index(const std::string& name) {
  for (int i = 0; i < kFactorCount; ++i) {
    if (kFactorNames[i] == name) return i;
  }
  throw DomainError("unknown factor name: " + name);
}

}  // namespace

std::vector<std::string> pareto_set(const World& w,
                                    std::span<const std::string> factor_names) {
  if (factor_names.empty()) throw DomainError("pareto_set requires at least one factor");
  std::vector<int> idx;
  idx.reserve(factor_names.size());
  for (const std::string& name : factor_names) idx.push_back(factor_index(name));

  std::vector<std::string> result;
  for (const Region& candidate : w.regions) {
    bool dominated = false;
    for (const Region& other : w.regions) {
      if (&other == &candidate) continue;
      bool all_leq = true;
      bool any_less = false;
      for (int i : idx) {
        double a = factor_value(other.factors, i);
        double b = factor_value(candidate.factors, i);
        if (a > b) all_leq = false;
        if (a < b) any_less = true;
      }
      if (all_leq && any_less) {
        dominated = true;
        break;
      }
    }
    if (!dominated) result.push_back(candidate.id);
  }
  std::sort(result.begin(), result.end());
  return result;
}

CapabilityPath linear_path(const CapabilityVector& from, const CapabilityVector& to) {
  validate(from);
  validate(to);
  return [from, to](double t) {
    CapabilityVector c;
    c.delta = from.delta + t * (to.delta - from.delta);
    c.gamma = from.gamma + t * (to.gamma - from.gamma);
    c.rho = from.rho + t * (to.rho - from.rho);
    c.tau = from.tau + t * (to.tau - from.tau);
    return c;
  };
}

std::optional<double> find_weight_inversion(const CapabilityPath& path,
                                            const WeightProfile& p, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be > 0");
  validate(p);

  auto gap = [&](double t) {
    EffectiveWeights eff = effective_weights(path(t), p);
    return eff.w[kLaborIndex] - eff.w[kMarketIndex];
  };

  constexpr int kScanSamples = 64;
  std::array<double, kScanSamples> g{};
  CapabilityVector prev;
  for (int i = 0; i < kScanSamples; ++i) {
    double t = static_cast<double>(i) / (kScanSamples - 1);
    CapabilityVector c = path(t);
    validate(c);
    if (i > 0) {
      constexpr double kSlack = 1e-12;
      if (c.delta < prev.delta - kSlack || c.gamma < prev.gamma - kSlack ||
          c.rho < prev.rho - kSlack || c.tau < prev.tau - kSlack) {
        throw DomainError("capability path must be componentwise nondecreasing");
      }
    }
    prev = c;
    g[i] = gap(t);
  }

  for (int i = 0; i < kScanSamples; ++i) {
    double t = static_cast<double>(i) / (kScanSamples - 1);
    if (g[i] == 0.0) return t;
    if (i + 1 < kScanSamples && g[i] * g[i + 1] < 0.0) {
      double lo = t;
      double hi = static_cast<double>(i + 1) / (kScanSamples - 1);
      double glo = g[i];
      while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        double gm = gap(mid);
        if (gm == 0.0) return mid;
        if ((gm > 0.0) == (glo > 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
  }
  return std::nullopt;
}

}  // namespace topophase
