#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "levypde/model/calculus.hpp"
#include "levypde/model/problem_spec.hpp"

namespace levypde::verify {

// Pointwise sign check of the truncation-vs-jump commutator
//   I(u, z; l) = beta(T_l(u + eta(u;z))) - beta(T_l(u) + eta(T_l(u);z)),
// which is <= 0 for every convex beta with beta'(0) = 0 when eta is
// nondecreasing in u with eta(0;z) = 0.  The check scans a deterministic
// (u, z, l) grid and reports the largest integrand found; a decreasing eta
// must push it positive.
struct JumpSignReport {
  double max_integrand = 0.0;
  double at_u = 0.0, at_z = 0.0, at_l = 0.0;
  std::int64_t points = 0;
  double tolerance = 1e-12;
  bool pass = true;  // max_integrand <= tolerance
};

// Throws if beta'(0) != 0 or the convexity probe fails (the inequality is
// only claimed for that class).
JumpSignReport jump_sign_check(const model::ProblemSpec& spec,
                               const model::SmoothEntropy& beta,
                               std::span<const double> levels, int u_points,
                               double u_span, double tolerance = 1e-12);

}  // namespace levypde::verify
