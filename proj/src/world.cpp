#include "topophase/world.hpp"

#include <cmath>
#include <set>

#include "topophase/errors.hpp"

namespace topophase {

double factor_value(const FactorCosts& f, int index) {
  switch (index) {
    case 0: return f.labor;
    case 1: return f.logistics;
    case 2: return f.land;
    case 3: return f.energy;
    case 4: return f.market_distance;
    case 5: return f.regulatory;
    default: throw DomainError("factor index out of range: " + std::to_string(index));
  }
}

const Region* World::find(std::string_view id) const {
  for (const Region& r : regions) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

double World::total_demand() const {
  double total = 0.0;
  for (const Region& r : regions) total += r.demand;
  return total;
}

double distance(const Region& a, const Region& b) {
  return std::hypot(a.x_km - b.x_km, a.y_km - b.y_km);
}

namespace {

void check_range(std::vector<ValidationIssue>& issues, const std::string& id,
                 const char* field, double v, double lo, double hi) {
  if (!(v >= lo && v <= hi) || !std::isfinite(v)) {
    issues.push_back({id, field,
                      "value " + std::to_string(v) + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]"});
  }
}

void check_nonneg(std::vector<ValidationIssue>& issues, const std::string& id,
                  const char* field, double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    issues.push_back({id, field, "must be finite and >= 0, got " + std::to_string(v)});
  }
}

}  // namespace

std::vector<ValidationIssue> validate_world(const World& w) {
  std::vector<ValidationIssue> issues;
  if (w.regions.empty()) {
    issues.push_back({"", "regions", "world must contain at least one region"});
  }
  if (!(w.transport_rate >= 0.0) || !std::isfinite(w.transport_rate)) {
    issues.push_back({"", "transport_rate", "must be finite and >= 0"});
  }

  std::set<std::string> seen;
  for (const Region& r : w.regions) {
    if (r.id.empty()) {
      issues.push_back({r.id, "id", "region id must be nonempty"});
    }
    if (!seen.insert(r.id).second) {
      issues.push_back({r.id, "id", "duplicate region id"});
    }
    if (!std::isfinite(r.x_km) || !std::isfinite(r.y_km)) {
      issues.push_back({r.id, "position", "coordinates must be finite"});
    }
    for (int i = 0; i < kFactorCount; ++i) {
      check_nonneg(issues, r.id, kFactorNames[i].data(), factor_value(r.factors, i));
    }
    check_range(issues, r.id, "humidity", r.environment.humidity, 0.0, 100.0);
    check_nonneg(issues, r.id, "dust", r.environment.dust);
    check_nonneg(issues, r.id, "thermal_cycling", r.environment.thermal_cycling);
    check_nonneg(issues, r.id, "irradiance", r.environment.irradiance);
    check_range(issues, r.id, "precipitation_days", r.environment.precipitation_days,
                0.0, 366.0);
    check_nonneg(issues, r.id, "demand", r.demand);
  }
  return issues;
}

}  // namespace topophase
