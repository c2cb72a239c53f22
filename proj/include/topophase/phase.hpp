#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "topophase/capability.hpp"
#include "topophase/mca.hpp"
#include "topophase/siteselect.hpp"
#include "topophase/topology.hpp"
#include "topophase/world.hpp"

namespace topophase {

enum class PhaseLabel { PhaseI, PhaseII, PhaseIII };

std::string_view to_string(PhaseLabel label);

// Manufacturing concentration index: sum of squared output shares.
// 1 = fully concentrated, 1/|regions| = uniform.
double mci(std::span<const double> outputs);

// PhaseIII beyond the decoupling surface; PhaseII once the effective
// market weight exceeds the labor weight; PhaseI otherwise (ties included).
PhaseLabel classify_phase(const CapabilityVector& c, const WeightProfile& p,
                          const SurfaceThresholds& t);

// Everything a sweep needs besides the world and the path.
struct ModelBundle {
  WeightProfile weights;
  CostConstants cost_constants;
  ProductSpec product;
  McaModel mca_model;
  SurfaceThresholds thresholds;
  AllocateOptions alloc_options;
};

struct SweepSample {
  double t = 0.0;
  double mci = 0.0;
  PhaseLabel phase = PhaseLabel::PhaseI;
  int facilities = 0;
};

enum class CriticalKind { SigmaW, SigmaN, SigmaH, MciJump };

std::string_view to_string(CriticalKind kind);

struct CriticalPoint {
  double t = 0.0;
  CriticalKind kind = CriticalKind::MciJump;
  double magnitude = 0.0;  // |dMCI| for jumps, 0 for surface crossings
};

struct SweepResult {
  std::vector<SweepSample> samples;         // ordered by t
  std::vector<CriticalPoint> critical_points;  // ordered by t
};

struct SweepOptions {
  double jump_threshold = 0.1;  // |dMCI| between adjacent samples
  double tol = 1e-4;            // bisection width on the path parameter
  bool parallel = true;
};

// Evaluates allocation, MCI, and phase label at evenly spaced points of the
// path; detects MCI jumps (bisected to tol) plus the sigma_w, sigma_n and
// sigma_h crossings when they lie inside [0,1].
SweepResult sweep_1d(const CapabilityPath& path, int steps, const World& w,
                     const ModelBundle& model, const SweepOptions& options = {});

struct PhaseCell {
  PhaseLabel phase = PhaseLabel::PhaseI;
  double mci = 0.0;
  bool feasible = true;  // false when allocation is infeasible at this cell
};

// Grid over (a = delta*rho, gamma) with delta = rho = sqrt(a) and fixed tau.
struct PhaseDiagram {
  std::vector<double> a_axis;      // rows
  std::vector<double> gamma_axis;  // cols
  double fixed_tau = 0.0;
  int rows = 0;
  int cols = 0;
  std::vector<PhaseCell> cells;  // row-major

  const PhaseCell& at(int row, int col) const { return cells[row * cols + col]; }
};

PhaseDiagram sweep_2d(double fixed_tau, int rows, int cols, const World& w,
                      const ModelBundle& model, bool parallel = true);

// Reference implementation without the parallel loop; kept for testing the
// parallel kernel bitwise and for benchmarking.
PhaseDiagram sweep_2d_serial(double fixed_tau, int rows, int cols, const World& w,
                             const ModelBundle& model);

enum class Detector { MciJump, SigmaW, SigmaN, SigmaH };

// Bisects the detector's sign change (or largest sampled MCI jump) to
// |interval| <= tol; nullopt when the path never triggers it.
std::optional<double> find_critical_point(const CapabilityPath& path, Detector detector,
                                          double tol, const World& w,
                                          const ModelBundle& model);

}  // namespace topophase
