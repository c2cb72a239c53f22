#pragma once

#include <string>

namespace topophase {

// A point c = (delta, gamma, rho, tau) in the capability space: dexterity,
// generalization, reliability, and tactile-vision fusion, each in [0,1].
struct CapabilityVector {
  double delta = 0.0;
  double gamma = 0.0;
  double rho = 0.0;
  double tau = 0.0;
};

void validate(const CapabilityVector& c);

struct ThresholdTriple {
  double delta_min = 0.0;
  double gamma_min = 0.0;
  double rho_min = 0.0;
};

// Decoupling surface: crossed when delta*rho > theta_h, gamma > theta_g,
// tau >= tau_min.
struct DecouplingThresholds {
  double theta_h = 0.0;
  double theta_g = 0.0;
  double tau_min = 0.0;
};

struct SurfaceThresholds {
  ThresholdTriple sigma_w;
  ThresholdTriple sigma_n;
  DecouplingThresholds sigma_h;
};

void validate(const SurfaceThresholds& t);

// Thresholds used when no industry preset is selected.
SurfaceThresholds default_thresholds();

// Named capability state bundled with its critical-surface thresholds.
// `metadata` is descriptive text only and never enters any computation.
struct IndustryPreset {
  std::string name;
  CapabilityVector current;
  SurfaceThresholds thresholds;
  std::string metadata;
};

struct CostConstants {
  double c_switch_0 = 0.0;           // switching cost at gamma = 0
  double switch_exponent = 2.0;      // decay curvature q
  double labor_baseline = 0.0;       // direct labor per batch at delta = 0
  double supervision_baseline = 0.0; // supervision per batch at yield 0
  int stations = 1;                  // line length n
};

void validate(const CostConstants& k);

// h(gamma, tau) = gamma^a * tau^b; joint generalization/tactile factor.
// Defaults to the geometric mean.
double fusion_factor(double gamma, double tau, double exp_gamma = 0.5,
                     double exp_tau = 0.5);

// C_switch = c_switch_0 * (1 - gamma)^q; zero at gamma = 1.
double switching_cost(double gamma, const CostConstants& k);

// C_labor = L0*(1 - delta) + S0*(1 - rho^n). The supervision term scales
// with per-cycle line failure probability.
double labor_cost(const CapabilityVector& c, const CostConstants& k);

// Probability of a full n-station cycle without failure: rho^n.
double line_yield(double rho, int stations);

// Autonomy predicate: strict on delta*rho and gamma, >= on tau.
bool crossed_sigma_h(const CapabilityVector& c, const SurfaceThresholds& t);

}  // namespace topophase
