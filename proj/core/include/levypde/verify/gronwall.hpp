#pragma once

#include <cstdint>
#include <vector>

#include "levypde/model/problem_spec.hpp"
#include "levypde/solver/grid.hpp"

namespace levypde::verify {

// Gronwall-style stability of the truncated-data approximation against the
// full-data run: at every stored t,
//   mean ||u_n(t) - u(t)||_1 <= e^{rate * t} (c_data * ||T_n u0 - u0||_1)
//                               + 5 SE(t) + floor,
// with `rate` the empirical growth rate from a contraction run and c_data a
// frozen data constant (1.0 by default: equality holds at t = 0).  The
// envelope carries a 1e-12-scale rounding allowance so the exact-equality
// case (rate = floor = 0) is not rejected by floating-point accumulation.
struct GronwallReport {
  std::vector<double> times;
  std::vector<double> lhs;      // mean distance
  std::vector<double> se;
  std::vector<double> rhs;      // envelope
  std::vector<double> margin;   // rhs - lhs (>= 0 means pass)
  double data_distance = 0.0;
  double rate = 0.0;
  bool pass = true;
};

GronwallReport gronwall_stability(const model::ProblemSpec& spec,
                                  const solver::Grid& grid, double eps,
                                  double t_final, double trunc_level,
                                  int n_paths, std::uint64_t base_seed,
                                  double rate, double c_data = 1.0,
                                  double floor = 0.0, int store_count = 33);

}  // namespace levypde::verify
