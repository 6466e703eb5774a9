#pragma once

#include <cstdint>
#include <vector>

#include "levypde/model/problem_spec.hpp"
#include "levypde/solver/grid.hpp"

namespace levypde::verify {

// Vanishing-viscosity Cauchy trend: for a decreasing eps ladder, paired
// space-time distances
//   D_j = mean int_0^T ||u_{eps_j}(t) - u_{eps_{j+1}}(t)||_1 dt
// must decrease along the ladder.  All runs share one grid and one step
// size (the strictest rung's), so the driving noise is identical; rungs
// where the scheme's own viscosity dx L_f / 2 exceeds eps/4 are flagged.
struct ViscosityReport {
  std::vector<double> eps_ladder;
  std::vector<double> distances;     // size ladder-1, consecutive pairs
  std::vector<double> se;
  std::vector<bool> rung_resolved;   // dx L_f / 2 <= eps/4 per rung
  bool strictly_decreasing = true;
};

ViscosityReport viscosity_convergence(const model::ProblemSpec& spec,
                                      const solver::Grid& grid,
                                      const std::vector<double>& eps_ladder,
                                      double t_final, int n_paths,
                                      std::uint64_t base_seed);

}  // namespace levypde::verify
