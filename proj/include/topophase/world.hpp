#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace topophase {

struct EnvironmentReading {
  double humidity = 0.0;            // % relative humidity, [0,100]
  double dust = 0.0;                // dimensionless index, >= 0
  double thermal_cycling = 0.0;     // diurnal-variation severity, >= 0
  double irradiance = 0.0;          // kWh/m^2/yr, >= 0
  double precipitation_days = 0.0;  // days/yr, [0,366]
};

// Per-region siting factor scores; higher = worse. Dimensionless: only
// relative magnitudes matter (ranking is scale invariant).
struct FactorCosts {
  double labor = 0.0;
  double logistics = 0.0;
  double land = 0.0;
  double energy = 0.0;
  double market_distance = 0.0;
  double regulatory = 0.0;
};

inline constexpr int kFactorCount = 6;

inline constexpr std::array<std::string_view, kFactorCount> kFactorNames = {
    "labor", "logistics", "land", "energy", "market_distance", "regulatory"};

double factor_value(const FactorCosts& f, int index);

struct Region {
  std::string id;
  std::string name;
  double x_km = 0.0;
  double y_km = 0.0;
  FactorCosts factors;
  EnvironmentReading environment;
  bool habitable = true;
  bool energy_access = true;
  double demand = 0.0;  // units/yr
};

struct World {
  std::vector<Region> regions;   // document order
  double transport_rate = 0.0;   // money per unit per km

  const Region* find(std::string_view id) const;
  double total_demand() const;
};

// Euclidean distance on planar km coordinates.
double distance(const Region& a, const Region& b);

struct ValidationIssue {
  std::string region_id;
  std::string field;
  std::string reason;
};

// One entry per violated Region/World invariant; empty means valid.
// A zero total demand is not flagged here; it only blocks allocation.
std::vector<ValidationIssue> validate_world(const World& w);

}  // namespace topophase
