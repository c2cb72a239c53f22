#include "topophase/capability.hpp"

#include <cmath>

#include "topophase/errors.hpp"

namespace topophase {

namespace {

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0,1], got " +
                      std::to_string(v));
  }
}

}  // namespace

void validate(const CapabilityVector& c) {
  check_unit(c.delta, "delta");
  check_unit(c.gamma, "gamma");
  check_unit(c.rho, "rho");
  check_unit(c.tau, "tau");
}

void validate(const SurfaceThresholds& t) {
  check_unit(t.sigma_w.delta_min, "sigma_w.delta_min");
  check_unit(t.sigma_w.gamma_min, "sigma_w.gamma_min");
  check_unit(t.sigma_w.rho_min, "sigma_w.rho_min");
  check_unit(t.sigma_n.delta_min, "sigma_n.delta_min");
  check_unit(t.sigma_n.gamma_min, "sigma_n.gamma_min");
  check_unit(t.sigma_n.rho_min, "sigma_n.rho_min");
  check_unit(t.sigma_h.theta_h, "sigma_h.theta_h");
  check_unit(t.sigma_h.theta_g, "sigma_h.theta_g");
  check_unit(t.sigma_h.tau_min, "sigma_h.tau_min");
}

SurfaceThresholds default_thresholds() {
  SurfaceThresholds t;
  t.sigma_w = {0.92, 0.70, 0.995};
  t.sigma_n = {0.80, 0.75, 0.999};
  t.sigma_h = {0.90, 0.60, 0.70};
  return t;
}

void validate(const CostConstants& k) {
  if (!(k.c_switch_0 >= 0.0)) throw DomainError("c_switch_0 must be >= 0");
  if (!(k.switch_exponent > 0.0)) throw DomainError("switch_exponent must be > 0");
  if (!(k.labor_baseline >= 0.0)) throw DomainError("labor_baseline must be >= 0");
  if (!(k.supervision_baseline >= 0.0)) {
    throw DomainError("supervision_baseline must be >= 0");
  }
  if (k.stations < 1) throw DomainError("stations must be >= 1");
}

double fusion_factor(double gamma, double tau, double exp_gamma, double exp_tau) {
  check_unit(gamma, "gamma");
  check_unit(tau, "tau");
  if (!(exp_gamma > 0.0) || !(exp_tau > 0.0)) {
    throw DomainError("fusion exponents must be > 0");
  }
  return std::pow(gamma, exp_gamma) * std::pow(tau, exp_tau);
}

double switching_cost(double gamma, const CostConstants& k) {
  check_unit(gamma, "gamma");
  validate(k);
  return k.c_switch_0 * std::pow(1.0 - gamma, k.switch_exponent);
}

double labor_cost(const CapabilityVector& c, const CostConstants& k) {
  validate(c);
  validate(k);
  double failure = 1.0 - line_yield(c.rho, k.stations);
  return k.labor_baseline * (1.0 - c.delta) + k.supervision_baseline * failure;
}

double line_yield(double rho, int stations) {
  check_unit(rho, "rho");
  if (stations < 1) throw DomainError("stations must be >= 1 (zero-station line is undefined)");
  return std::pow(rho, static_cast<double>(stations));
}

bool crossed_sigma_h(const CapabilityVector& c, const SurfaceThresholds& t) {
  validate(c);
  return c.delta * c.rho > t.sigma_h.theta_h && c.gamma > t.sigma_h.theta_g &&
         c.tau >= t.sigma_h.tau_min;
}

}  // namespace topophase
