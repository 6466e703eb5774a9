#pragma once

#include <cstdint>
#include <vector>

#include "levypde/model/problem_spec.hpp"
#include "levypde/solver/grid.hpp"

namespace levypde::verify {

// Cauchy property of the truncated-data approximations u_n (data T_n(u0)):
// for consecutive levels the paired-noise distance
//   D(n1, n2) = sup_t mean ||u_{n1}(t) - u_{n2}(t)||_1
// must fall along the ladder and stay below
//   C_emp * ||T_{n1} u0 - T_{n2} u0||_1 + 5 SE.
struct TruncationPair {
  double n1 = 0.0, n2 = 0.0;
  double data_distance = 0.0;   // ||T_{n1} u0 - T_{n2} u0||_1
  double sup_distance = 0.0;    // sup_t of mean distance
  double se_at_sup = 0.0;
  bool bounded = true;          // sup <= C_emp * data + 5 SE
};

struct TruncationCauchyReport {
  std::vector<double> levels;
  std::vector<TruncationPair> pairs;  // consecutive ladder pairs
  bool monotone = true;               // pair distances nonincreasing
  bool all_bounded = true;
  double contraction_constant = 1.0;  // C_emp used for the bound
};

// Levels must be strictly increasing; all ladder solves share driving paths
// seed-by-seed so the distances are paired.
TruncationCauchyReport truncated_data_cauchy(
    const model::ProblemSpec& spec, const solver::Grid& grid, double eps,
    double t_final, const std::vector<double>& levels, int n_paths,
    std::uint64_t base_seed, double contraction_constant, int store_count = 33);

}  // namespace levypde::verify
