#include "topophase/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "topophase/errors.hpp"
#include "topophase/text.hpp"

namespace topophase {

std::string_view to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::PhaseI: return "PhaseI";
    case PhaseLabel::PhaseII: return "PhaseII";
    case PhaseLabel::PhaseIII: return "PhaseIII";
  }
  throw DomainError("invalid phase label");
}

std::string_view to_string(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::SigmaW: return "SigmaW";
    case CriticalKind::SigmaN: return "SigmaN";
    case CriticalKind::SigmaH: return "SigmaH";
    case CriticalKind::MciJump: return "MciJump";
  }
  throw DomainError("invalid critical kind");
}

double mci(std::span<const double> outputs) {
  if (outputs.empty()) throw DomainError("mci requires at least one region");
  double total = 0.0;
  for (double m : outputs) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw DomainError("regional outputs must be finite and >= 0");
    }
    total += m;
  }
  if (!(total > 0.0)) throw DomainError("mci requires total output > 0");
  double sum = 0.0;
  for (double m : outputs) {
    double share = m / total;
    sum += share * share;
  }
  return sum;
}

PhaseLabel classify_phase(const CapabilityVector& c, const WeightProfile& p,
                          const SurfaceThresholds& t) {
  if (crossed_sigma_h(c, t)) return PhaseLabel::PhaseIII;
  EffectiveWeights w = effective_weights(c, p);
  if (w.w[kMarketIndex] > w.w[kLaborIndex]) return PhaseLabel::PhaseII;
  return PhaseLabel::PhaseI;
}

//---------------------------------------------------------------------------
// sweeps
//---------------------------------------------------------------------------

namespace {

AllocateOptions inner_options(const ModelBundle& model) {
  // Sweeps parallelize over samples/cells; keep the solver serial inside.
  AllocateOptions opts = model.alloc_options;
  opts.parallel = false;
  return opts;
}

struct SampleEval {
  SweepSample sample;
  bool infeasible = false;
  bool hard_error = false;  // anything other than infeasibility
  std::string error;
};

// Exceptions must not escape the parallel loop; they are recorded and
// rethrown once the loop has joined.
SampleEval evaluate_sample(double t, const CapabilityPath& path, const World& w,
                           const ModelBundle& model, const AllocateOptions& opts) {
  SampleEval out;
  out.sample.t = t;
  try {
    CapabilityVector c = path(t);
    Allocation alloc = allocate(w, c, model.cost_constants, model.product,
                                model.weights, model.thresholds, model.mca_model, opts);
    out.sample.mci = mci(alloc.outputs);
    out.sample.phase = classify_phase(c, model.weights, model.thresholds);
    out.sample.facilities = static_cast<int>(alloc.facilities.size());
  } catch (const InfeasibleError& e) {
    out.infeasible = true;
    out.error = e.what();
  } catch (const std::exception& e) {
    out.hard_error = true;
    out.error = e.what();
  }
  return out;
}

double mci_at(double t, const CapabilityPath& path, const World& w,
              const ModelBundle& model, const AllocateOptions& opts) {
  Allocation alloc = allocate(w, path(t), model.cost_constants, model.product,
                              model.weights, model.thresholds, model.mca_model, opts);
  return mci(alloc.outputs);
}

// Narrows [lo, hi] onto the largest interior jump of a piecewise-constant
// observable; returns midpoint and writes the bracket delta.
double bisect_jump(double lo, double hi, double lo_val, double hi_val, double tol,
                   const std::function<double(double)>& observe, double* magnitude) {
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double mid_val = observe(mid);
    if (std::fabs(mid_val - lo_val) >= std::fabs(hi_val - mid_val)) {
      hi = mid;
      hi_val = mid_val;
    } else {
      lo = mid;
      lo_val = mid_val;
    }
  }
  if (magnitude != nullptr) *magnitude = std::fabs(hi_val - lo_val);
  return 0.5 * (lo + hi);
}

// Boundary of a monotone boolean predicate between a false and a true sample.
double bisect_flag(double lo, double hi, bool lo_flag, double tol,
                   const std::function<bool(double)>& flag) {
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (flag(mid) == lo_flag) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Root of a scalar function between samples of opposite sign.
double bisect_sign(double lo, double hi, double lo_val, double tol,
                   const std::function<double(double)>& f) {
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double mid_val = f(mid);
    if (mid_val == 0.0) return mid;
    if ((mid_val > 0.0) == (lo_val > 0.0)) {
      lo = mid;
      lo_val = mid_val;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SweepResult sweep_1d(const CapabilityPath& path, int steps, const World& w,
                     const ModelBundle& model, const SweepOptions& options) {
  if (steps < 2) throw DomainError("sweep requires at least 2 steps");
  if (!(options.tol > 0.0)) throw DomainError("tolerance must be > 0");

  AllocateOptions opts = inner_options(model);
  std::vector<SampleEval> evals(static_cast<size_t>(steps));

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (options.parallel)
#endif
  for (int i = 0; i < steps; ++i) {
    double t = static_cast<double>(i) / (steps - 1);
    evals[static_cast<size_t>(i)] = evaluate_sample(t, path, w, model, opts);
  }

  SweepResult result;
  result.samples.reserve(evals.size());
  for (const SampleEval& e : evals) {
    if (e.hard_error) {
      throw DomainError("t=" + format_fixed(e.sample.t) + ": " + e.error);
    }
    if (e.infeasible) {
      throw InfeasibleError("t=" + format_fixed(e.sample.t) + ": " + e.error);
    }
    result.samples.push_back(e.sample);
  }

  auto observe = [&](double t) { return mci_at(t, path, w, model, opts); };

  for (size_t i = 0; i + 1 < result.samples.size(); ++i) {
    const SweepSample& a = result.samples[i];
    const SweepSample& b = result.samples[i + 1];
    if (std::fabs(b.mci - a.mci) > options.jump_threshold) {
      double magnitude = 0.0;
      double t_star = bisect_jump(a.t, b.t, a.mci, b.mci, options.tol, observe, &magnitude);
      result.critical_points.push_back({t_star, CriticalKind::MciJump, magnitude});
    }
  }

  if (auto root = find_weight_inversion(path, model.weights, options.tol)) {
    result.critical_points.push_back({*root, CriticalKind::SigmaW, 0.0});
  }

  auto crossed = [&](double t) { return crossed_sigma_h(path(t), model.thresholds); };
  double n_star = resolve_n_star(model.product, w);
  auto batch_gap = [&](double t) {
    return mebs(path(t), model.cost_constants, model.product) - n_star;
  };
  const int scan = 64;
  for (int i = 0; i + 1 < scan; ++i) {
    double lo = static_cast<double>(i) / (scan - 1);
    double hi = static_cast<double>(i + 1) / (scan - 1);
    if (crossed(lo) != crossed(hi)) {
      double t_star = bisect_flag(lo, hi, crossed(lo), options.tol, crossed);
      result.critical_points.push_back({t_star, CriticalKind::SigmaH, 0.0});
      break;
    }
  }
  for (int i = 0; i + 1 < scan; ++i) {
    double lo = static_cast<double>(i) / (scan - 1);
    double hi = static_cast<double>(i + 1) / (scan - 1);
    double glo = batch_gap(lo);
    double ghi = batch_gap(hi);
    if (glo == 0.0) {
      result.critical_points.push_back({lo, CriticalKind::SigmaN, 0.0});
      break;
    }
    if (glo * ghi < 0.0) {
      double t_star = bisect_sign(lo, hi, glo, options.tol, batch_gap);
      result.critical_points.push_back({t_star, CriticalKind::SigmaN, 0.0});
      break;
    }
  }

  std::sort(result.critical_points.begin(), result.critical_points.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) {
              if (a.t != b.t) return a.t < b.t;
              return static_cast<int>(a.kind) < static_cast<int>(b.kind);
            });
  return result;
}

namespace {

struct CellEval {
  PhaseCell cell;
  bool hard_error = false;
  std::string error;
};

CellEval evaluate_cell(double a, double gamma, double fixed_tau, const World& w,
                       const ModelBundle& model, const AllocateOptions& opts) {
  CapabilityVector c;
  c.delta = std::sqrt(a);
  c.rho = c.delta;
  c.gamma = gamma;
  c.tau = fixed_tau;

  CellEval out;
  try {
    out.cell.phase = classify_phase(c, model.weights, model.thresholds);
    Allocation alloc = allocate(w, c, model.cost_constants, model.product,
                                model.weights, model.thresholds, model.mca_model, opts);
    out.cell.mci = mci(alloc.outputs);
  } catch (const InfeasibleError&) {
    out.cell.feasible = false;
    out.cell.mci = std::numeric_limits<double>::quiet_NaN();
  } catch (const std::exception& e) {
    out.hard_error = true;
    out.error = e.what();
  }
  return out;
}

PhaseDiagram make_grid(double fixed_tau, int rows, int cols) {
  if (rows < 2 || cols < 2) throw DomainError("phase diagram needs rows, cols >= 2");
  if (!(fixed_tau >= 0.0 && fixed_tau <= 1.0)) {
    throw DomainError("fixed_tau must lie in [0,1]");
  }
  PhaseDiagram grid;
  grid.fixed_tau = fixed_tau;
  grid.rows = rows;
  grid.cols = cols;
  grid.a_axis.resize(static_cast<size_t>(rows));
  grid.gamma_axis.resize(static_cast<size_t>(cols));
  for (int i = 0; i < rows; ++i) {
    grid.a_axis[static_cast<size_t>(i)] = static_cast<double>(i) / (rows - 1);
  }
  for (int j = 0; j < cols; ++j) {
    grid.gamma_axis[static_cast<size_t>(j)] = static_cast<double>(j) / (cols - 1);
  }
  grid.cells.resize(static_cast<size_t>(rows) * static_cast<size_t>(cols));
  return grid;
}

}  // namespace

PhaseDiagram sweep_2d(double fixed_tau, int rows, int cols, const World& w,
                      const ModelBundle& model, bool parallel) {
  PhaseDiagram grid = make_grid(fixed_tau, rows, cols);
  AllocateOptions opts = inner_options(model);
  long cell_count = static_cast<long>(rows) * cols;
  std::vector<CellEval> evals(static_cast<size_t>(cell_count));

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#else
  (void)parallel;
#endif
  for (long idx = 0; idx < cell_count; ++idx) {
    int i = static_cast<int>(idx / cols);
    int j = static_cast<int>(idx % cols);
    evals[static_cast<size_t>(idx)] = evaluate_cell(
        grid.a_axis[static_cast<size_t>(i)], grid.gamma_axis[static_cast<size_t>(j)],
        fixed_tau, w, model, opts);
  }

  for (long idx = 0; idx < cell_count; ++idx) {
    const CellEval& e = evals[static_cast<size_t>(idx)];
    if (e.hard_error) throw DomainError(e.error);
    grid.cells[static_cast<size_t>(idx)] = e.cell;
  }
  return grid;
}

PhaseDiagram sweep_2d_serial(double fixed_tau, int rows, int cols, const World& w,
                             const ModelBundle& model) {
  PhaseDiagram grid = make_grid(fixed_tau, rows, cols);
  AllocateOptions opts = inner_options(model);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      CellEval e = evaluate_cell(grid.a_axis[static_cast<size_t>(i)],
                                 grid.gamma_axis[static_cast<size_t>(j)], fixed_tau, w,
                                 model, opts);
      if (e.hard_error) throw DomainError(e.error);
      grid.cells[static_cast<size_t>(i) * cols + j] = e.cell;
    }
  }
  return grid;
}

std::optional<double> find_critical_point(const CapabilityPath& path, Detector detector,
                                          double tol, const World& w,
                                          const ModelBundle& model) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be > 0");
  const int scan = 64;

  switch (detector) {
    case Detector::SigmaW:
      return find_weight_inversion(path, model.weights, tol);

    case Detector::SigmaH: {
      auto crossed = [&](double t) { return crossed_sigma_h(path(t), model.thresholds); };
      for (int i = 0; i + 1 < scan; ++i) {
        double lo = static_cast<double>(i) / (scan - 1);
        double hi = static_cast<double>(i + 1) / (scan - 1);
        if (crossed(lo) != crossed(hi)) {
          return bisect_flag(lo, hi, crossed(lo), tol, crossed);
        }
      }
      return std::nullopt;
    }

    case Detector::SigmaN: {
      double n_star = resolve_n_star(model.product, w);
      auto gap = [&](double t) {
        return mebs(path(t), model.cost_constants, model.product) - n_star;
      };
      for (int i = 0; i + 1 < scan; ++i) {
        double lo = static_cast<double>(i) / (scan - 1);
        double hi = static_cast<double>(i + 1) / (scan - 1);
        double glo = gap(lo);
        if (glo == 0.0) return lo;
        if (glo * gap(hi) < 0.0) return bisect_sign(lo, hi, glo, tol, gap);
      }
      return std::nullopt;
    }

    case Detector::MciJump: {
      AllocateOptions opts = inner_options(model);
      auto observe = [&](double t) { return mci_at(t, path, w, model, opts); };
      std::vector<double> values(scan);
      for (int i = 0; i < scan; ++i) {
        values[static_cast<size_t>(i)] = observe(static_cast<double>(i) / (scan - 1));
      }
      int best = -1;
      double best_jump = 1e-12;  // plateaus repeat bit-identical values
      for (int i = 0; i + 1 < scan; ++i) {
        double jump = std::fabs(values[static_cast<size_t>(i + 1)] -
                                values[static_cast<size_t>(i)]);
        if (jump > best_jump) {
          best_jump = jump;
          best = i;
        }
      }
      if (best < 0) return std::nullopt;
      double lo = static_cast<double>(best) / (scan - 1);
      double hi = static_cast<double>(best + 1) / (scan - 1);
      return bisect_jump(lo, hi, values[static_cast<size_t>(best)],
                         values[static_cast<size_t>(best + 1)], tol, observe, nullptr);
    }
  }
  throw DomainError("invalid detector");
}

}  // namespace topophase
