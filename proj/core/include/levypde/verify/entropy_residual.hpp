#pragma once

#include <span>
#include <string>
#include <vector>

#include "levypde/model/entropy_triple.hpp"
#include "levypde/solver/scheme.hpp"
#include "levypde/verify/test_function.hpp"

namespace levypde::verify {

// Parameters of the truncation-defect allowance on the right side of the
// renormalized inequality: level l, band width delta, weight K (which must
// dominate sup |beta'| of the triple).
struct MeasureParams {
  double l = 1.0;
  double delta = 0.1;
  double weight = 1.0;  // K
};

// Ensemble residual of the renormalized entropy inequality for one
// (triple, psi, measure) combination: mean over paths of
//
//   int beta(T_l u) dpsi/dt + nu(T_l u) lap psi + grad psi . zeta(T_l u)
//   + int sigma(T_l u) beta'(T_l u) psi dW
//   + 1/2 int sigma(T_l u)^2 beta''(T_l u) psi dt
//   + compensated jump term + jump correction term
//   - int beta''(T_l u) |D_h G(T_l u)|^2 psi
//   + int beta(T_l u0) psi(0) + mu^K(psi),
//
// which is >= 0 in expectation for renormalized entropy solutions; the
// numerical verdict allows a discretization budget plus 5 standard errors.
struct ResidualReport {
  double mean = 0.0;
  double se = 0.0;
  double budget = 0.0;
  bool pass = true;  // mean >= -(budget + 5 se)
  // breakdown of the ensemble means, for reports
  double time_term = 0.0, diffusion_term = 0.0, flux_term = 0.0;
  double brownian_term = 0.0, ito_correction = 0.0;
  double jump_martingale = 0.0, jump_correction = 0.0;
  double dissipation = 0.0, initial_term = 0.0, measure_term = 0.0;
  std::string label;
};

// Budget convention shared by the residual checks.
double residual_budget(double budget_c, double dx, double dt);

// Preconditions: every-step snapshots; psi clear of the boundary ring;
// sup|beta'| <= measure.weight (+1e-9); when the problem has active jump
// noise the triple must additionally have beta'(0) = 0 (the sign analysis of
// the jump terms needs it; deterministic and Brownian-only problems accept
// shifted entropies).
ResidualReport renormalized_residual(const model::ProblemSpec& spec,
                                     std::span<const solver::PathSample> paths,
                                     const model::EntropyTriple& triple,
                                     const TestFunction& psi,
                                     const MeasureParams& measure,
                                     double budget_c);

// Kruzkov constants for entropy sweeps: `count` evenly spaced values
// spanning [-span, span] (count odd keeps 0 in the grid).
std::vector<double> kruzkov_constants(double span, int count = 17);

}  // namespace levypde::verify
