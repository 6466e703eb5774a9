#pragma once

#include "levypde/model/calculus.hpp"
#include "levypde/model/problem_spec.hpp"

namespace levypde::model {

// Entropy / entropy-flux / diffusion-companion triple for a scalar entropy
// beta:
//   zeta_k'(r) = beta'(r) f_k'(r),   nu'(r) = beta'(r) Phi'(r),
// tabulated by cumulative quadrature from 0 (additive constants are
// irrelevant: the companions only ever multiply derivatives of compactly
// supported test functions).
struct EntropyTriple {
  SmoothEntropy beta;
  CumulativeTable zeta[2];
  CumulativeTable nu;
  int axes = 1;

  double slope_bound = 0.0;         // K = sup |beta'| over the table range
  bool convex = true;               // beta'' >= -tol at every probe node
  bool zero_slope_at_origin = true; // beta'(0) == 0 (within tol)
  double range = 0.0;

  double zeta_at(double r, int axis) const { return zeta[axis](r); }
  double nu_at(double r) const { return nu(r); }
};

EntropyTriple make_entropy_triple(const ProblemSpec& spec,
                                  const SmoothEntropy& beta, double range,
                                  int nodes_per_unit = 1024);

}  // namespace levypde::model
