#pragma once

#include <vector>

#include "levypde/model/problem_spec.hpp"
#include "levypde/solver/scheme.hpp"

namespace levypde::functionals {

// Boundary-layer error terms controlling the defect measure at level l:
//   E1 = int_{|u0| > l} |u0| dx                          (data tail)
//   E2 = (1/delta) E int int_{l < |u| < l+delta} sigma(u)^2 dx dt
//   E3 = (1/delta) E int int_E int_0^1 (1-lambda) eta(u;z)^2
//            1{l < |u + lambda eta(u;z)| < l+delta} dlambda m(dz) dx dt
// evaluated at a fixed band width delta (the delta -> 0 limsup is probed by
// the delta ladder at the harness level).  E2/E3 are per-path here; callers
// average over the ensemble.
struct BoundaryLayerMass {
  double l = 0.0, delta = 0.0;
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;
  double total() const { return e1 + e2 + e3; }
};

double data_tail_mass(const model::ProblemSpec& spec, const solver::Grid& grid,
                      double l);  // E1 on the grid

// Requires every-step storage (left-endpoint time quadrature).
BoundaryLayerMass boundary_layer_mass(const model::ProblemSpec& spec,
                                      const solver::PathSample& path, double l,
                                      double delta);

// Streaming twin accumulating the E2/E3 time integrals of one path for a
// whole ladder of levels at once (one pass over the walk).
class BandMassAccumulator {
 public:
  BandMassAccumulator(const model::ProblemSpec& spec,
                      const solver::Grid& grid, std::vector<double> levels,
                      double delta);
  void on_step(const solver::StepRecord& rec);
  // E2/E3 integrals per level, already divided by delta.
  std::vector<BoundaryLayerMass> finish(double eps_unused = 0.0) const;

 private:
  const model::ProblemSpec* spec_;
  solver::Grid grid_;
  std::vector<double> levels_;
  double delta_;
  std::vector<double> e2_, e3_;
};

// Level scan: ensemble means of E(l) = E1 + E2 + E3 over an increasing level
// grid, plus the sub-ladder selected by successive thresholds.
struct LevelScan {
  std::vector<double> levels;
  std::vector<double> e1, e2_mean, e2_se, e3_mean, e3_se;
  std::vector<double> total;              // E1 + mean E2 + mean E3
  std::vector<double> thresholds;         // 1e-1, 1e-2, ... while reachable
  std::vector<double> selected_levels;    // first level beating threshold j
  bool first_threshold_unreachable = false;
};

// The level grid must be increasing and should cover
// [0.5 sup|u0|, 4 sup|u0|]; throws on a non-increasing grid or delta <= 0.
LevelScan find_dissipating_levels(const model::ProblemSpec& spec,
                                  std::span<const solver::PathSample> ensemble,
                                  std::span<const double> level_grid,
                                  double delta);

}  // namespace levypde::functionals
