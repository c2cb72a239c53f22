#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "topophase/capability.hpp"
#include "topophase/siteselect.hpp"
#include "topophase/world.hpp"

namespace topophase {

enum class EnvParameter {
  Humidity = 0,
  Dust,
  ThermalCycling,
  Irradiance,
  PrecipitationDays,
};

inline constexpr int kEnvParameterCount = 5;

std::string_view to_string(EnvParameter p);
EnvParameter env_parameter_from(std::string_view name);

enum class Sidedness { PenalizeAbove, PenalizeBelow, TwoSided };

std::string_view to_string(Sidedness s);
Sidedness sidedness_from(std::string_view name);

// Exponential response exp(-k * excursion/scale) with a one- or two-sided
// excursion from the machine-optimal reading. Never reaches zero, so the
// multiplicative adaptation factor stays in (0,1].
struct EnvResponseSpec {
  EnvParameter parameter = EnvParameter::Humidity;
  double optimum = 0.0;
  double scale = 1.0;        // same units as the reading, > 0
  double sensitivity = 0.0;  // dimensionless k, >= 0
  Sidedness sidedness = Sidedness::PenalizeAbove;
};

void validate(const EnvResponseSpec& spec);

// One response per environmental parameter, indexed by EnvParameter.
struct McaModel {
  std::array<EnvResponseSpec, kEnvParameterCount> responses;
};

void validate(const McaModel& m);

double reading_for(const EnvironmentReading& e, EnvParameter p);

// phi_j(e); 1 at the optimum and on the unpenalized side.
double env_response(double reading, const EnvResponseSpec& spec);

// phi(x) = product of the five responses.
double adaptation_factor(const Region& r, const McaModel& m);

// rho_eff = rho_base * phi(x); never exceeds rho_base.
double effective_reliability(double rho_base, const Region& r, const McaModel& m);

struct McaRankEntry {
  std::string region_id;
  double phi = 1.0;
  std::array<double, kEnvParameterCount> responses{};
};

// Regions ranked by phi descending, ties by id.
std::vector<McaRankEntry> mca_rank(const World& w, const McaModel& m);

// True iff x has a strictly better machine climate than x_ref while being
// strictly less attractive under the traditional baseline weighting.
bool has_mca(const Region& x, const Region& x_ref, const McaModel& m,
             const WeightProfile& p);

// Below the decoupling surface: habitable AND energy-accessible regions.
// Above it: all energy-accessible regions. Returned ids are sorted.
std::vector<std::string> feasible_set(const World& w, const CapabilityVector& c,
                                      const SurfaceThresholds& t);

}  // namespace topophase
