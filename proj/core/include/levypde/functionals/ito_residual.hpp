#pragma once

#include "levypde/model/calculus.hpp"
#include "levypde/model/problem_spec.hpp"
#include "levypde/solver/scheme.hpp"
#include "levypde/verify/test_function.hpp"

namespace levypde::functionals {

// Discrete residual of the viscous chain-rule identity for a C^2 entropy S:
// left side
//   int S(u) dpsi/dt + nu_S(u) lap psi + grad psi . zeta_S(u)
//     + eps int lap_h S(u) psi
//     + int sigma(u) S'(u) psi dW + 1/2 int sigma(u)^2 S''(u) psi dt
//     + sum_jumps [S(u + eta) - S(u)] psi - compensator part
//     + int int [S(u + eta) - S(u) - eta S'(u)] psi m(dz) dt
// minus right side
//   int S''(u) (|D_h G(u)|^2 + eps |D_h u|^2) psi
//     - int S(u0) psi(0) + int S(u(T)) psi(T),
// with zeta_S' = S' f', nu_S' = S' Phi'.  All state evaluations are at the
// left endpoint of each step (predictable), so every noise term has zero
// conditional mean and the ensemble-mean residual isolates the
// discretization bias.
struct ItoResidual {
  double time_term = 0.0;
  double diffusion_term = 0.0;
  double flux_term = 0.0;
  double eps_term = 0.0;
  double brownian_term = 0.0;
  double ito_correction = 0.0;
  double jump_martingale = 0.0;
  double jump_correction = 0.0;
  double dissipation = 0.0;     // right-side energy term
  double initial_term = 0.0;    // int S(u0) psi(0)
  double terminal_term = 0.0;   // int S(u(T)) psi(T)
  double residual = 0.0;        // LHS - RHS
};

// Requires every-step snapshots and a test function supported strictly
// inside the box (2-cell ring).
ItoResidual ito_levy_residual(const model::ProblemSpec& spec,
                              const solver::PathSample& path,
                              const model::SmoothEntropy& entropy,
                              const verify::TestFunction& psi);

}  // namespace levypde::functionals
