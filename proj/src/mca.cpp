#include "topophase/mca.hpp"

#include <algorithm>
#include <cmath>

#include "topophase/errors.hpp"

namespace topophase {

std::string_view to_string(EnvParameter p) {
  switch (p) {
    case EnvParameter::Humidity: return "humidity";
    case EnvParameter::Dust: return "dust";
    case EnvParameter::ThermalCycling: return "thermal_cycling";
    case EnvParameter::Irradiance: return "irradiance";
    case EnvParameter::PrecipitationDays: return "precipitation_days";
  }
  throw DomainError("invalid environmental parameter");
}

EnvParameter env_parameter_from(std::string_view name) {
  for (int i = 0; i < kEnvParameterCount; ++i) {
    auto p = static_cast<EnvParameter>(i);
    if (to_string(p) == name) return p;
  }
  throw ConfigError("unknown environmental parameter: " + std::string(name));
}

std::string_view to_string(Sidedness s) {
  switch (s) {
    case Sidedness::PenalizeAbove: return "penalize_above";
    case Sidedness::PenalizeBelow: return "penalize_below";
    case Sidedness::TwoSided: return "two_sided";
  }
  throw DomainError("invalid sidedness");
}

Sidedness sidedness_from(std::string_view name) {
  if (name == "penalize_above") return Sidedness::PenalizeAbove;
  if (name == "penalize_below") return Sidedness::PenalizeBelow;
  if (name == "two_sided") return Sidedness::TwoSided;
  throw ConfigError("unknown sidedness: " + std::string(name));
}

void validate(const EnvResponseSpec& spec) {
  if (!(spec.scale > 0.0) || !std::isfinite(spec.scale)) {
    throw ConfigError("response scale must be finite and > 0");
  }
  if (!(spec.sensitivity >= 0.0) || !std::isfinite(spec.sensitivity)) {
    throw ConfigError("response sensitivity must be finite and >= 0");
  }
  if (!std::isfinite(spec.optimum)) throw ConfigError("response optimum must be finite");
}

void validate(const McaModel& m) {
  for (int i = 0; i < kEnvParameterCount; ++i) {
    validate(m.responses[i]);
    if (m.responses[i].parameter != static_cast<EnvParameter>(i)) {
      throw ConfigError("mca_model must contain exactly one response per parameter");
    }
  }
}

double reading_for(const EnvironmentReading& e, EnvParameter p) {
  switch (p) {
    case EnvParameter::Humidity: return e.humidity;
    case EnvParameter::Dust: return e.dust;
    case EnvParameter::ThermalCycling: return e.thermal_cycling;
    case EnvParameter::Irradiance: return e.irradiance;
    case EnvParameter::PrecipitationDays: return e.precipitation_days;
  }
  throw DomainError("invalid environmental parameter");
}

namespace {

void check_reading(double reading, EnvParameter p) {
  if (!std::isfinite(reading)) throw DomainError("environment reading must be finite");
  switch (p) {
    case EnvParameter::Humidity:
      if (reading < 0.0 || reading > 100.0) {
        throw DomainError("humidity must lie in [0,100], got " + std::to_string(reading));
      }
      break;
    case EnvParameter::PrecipitationDays:
      if (reading < 0.0 || reading > 366.0) {
        throw DomainError("precipitation_days must lie in [0,366], got " +
                          std::to_string(reading));
      }
      break;
    default:
      if (reading < 0.0) {
        throw DomainError(std::string(to_string(p)) + " must be >= 0, got " +
                          std::to_string(reading));
      }
  }
}

}  // namespace

double env_response(double reading, const EnvResponseSpec& spec) {
  validate(spec);
  check_reading(reading, spec.parameter);
  double excursion = 0.0;
  switch (spec.sidedness) {
    case Sidedness::PenalizeAbove:
      excursion = std::max(0.0, (reading - spec.optimum) / spec.scale);
      break;
    case Sidedness::PenalizeBelow:
      excursion = std::max(0.0, (spec.optimum - reading) / spec.scale);
      break;
    case Sidedness::TwoSided:
      excursion = std::fabs(reading - spec.optimum) / spec.scale;
      break;
  }
  return std::exp(-spec.sensitivity * excursion);
}

double adaptation_factor(const Region& r, const McaModel& m) {
  validate(m);
  double phi = 1.0;
  for (int i = 0; i < kEnvParameterCount; ++i) {
    phi *= env_response(reading_for(r.environment, static_cast<EnvParameter>(i)),
                        m.responses[i]);
  }
  return phi;
}

double effective_reliability(double rho_base, const Region& r, const McaModel& m) {
  if (!(rho_base >= 0.0 && rho_base <= 1.0)) {
    throw DomainError("rho_base must lie in [0,1]");
  }
  return rho_base * adaptation_factor(r, m);
}

std::vector<McaRankEntry> mca_rank(const World& w, const McaModel& m) {
  if (w.regions.empty()) throw DomainError("mca_rank requires a nonempty world");
  validate(m);
  std::vector<McaRankEntry> out;
  out.reserve(w.regions.size());
  for (const Region& r : w.regions) {
    McaRankEntry entry;
    entry.region_id = r.id;
    entry.phi = 1.0;
    for (int i = 0; i < kEnvParameterCount; ++i) {
      entry.responses[i] = env_response(
          reading_for(r.environment, static_cast<EnvParameter>(i)), m.responses[i]);
      entry.phi *= entry.responses[i];
    }
    out.push_back(std::move(entry));
  }
  std::sort(out.begin(), out.end(), [](const McaRankEntry& a, const McaRankEntry& b) {
    if (a.phi != b.phi) return a.phi > b.phi;
    return a.region_id < b.region_id;
  });
  return out;
}

bool has_mca(const Region& x, const Region& x_ref, const McaModel& m,
             const WeightProfile& p) {
  return adaptation_factor(x, m) > adaptation_factor(x_ref, m) &&
         traditional_score(x, p) < traditional_score(x_ref, p);
}

std::vector<std::string> feasible_set(const World& w, const CapabilityVector& c,
                                      const SurfaceThresholds& t) {
  bool decoupled = crossed_sigma_h(c, t);
  std::vector<std::string> out;
  for (const Region& r : w.regions) {
    if (r.energy_access && (decoupled || r.habitable)) out.push_back(r.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace topophase
