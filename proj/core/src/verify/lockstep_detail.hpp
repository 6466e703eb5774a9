#pragma once

#include <algorithm>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "levypde/model/problem_spec.hpp"
#include "levypde/noise/noise_path.hpp"
#include "levypde/solver/grid.hpp"
#include "levypde/solver/scheme.hpp"

namespace levypde::verify::detail {

// Samples arbitrary initial data at cell centers (the stability checks pair
// solves with data other than the spec's own).
inline std::vector<double> sample_data(const model::InitialData& data,
                                       const solver::Grid& grid) {
  std::vector<double> s(static_cast<size_t>(grid.cells()));
  if (grid.dim == 1) {
    for (int i = 0; i < grid.n; ++i)
      s[static_cast<size_t>(i)] = data.value(grid.x(i));
  } else {
    for (int j = 0; j < grid.n; ++j)
      for (int i = 0; i < grid.n; ++i)
        s[static_cast<size_t>(grid.index(i, j))] = data.value(grid.x(i), grid.x(j));
  }
  return s;
}

// Advances several states through one realized noise path in lockstep: the
// same StepInputs drive one step() per state, so cross-state distances are
// paired pathwise.  Mirrors walk()'s stability guard per state.  `after(k)`
// fires once every state has advanced past step k.
inline void lockstep(const model::ProblemSpec& spec, const solver::Grid& grid,
                     std::span<const double> eps,
                     std::vector<std::vector<double>>& states,
                     const noise::NoisePath& noise,
                     const std::function<void(std::int64_t)>& after) {
  const size_t m = states.size();
  if (eps.size() != m)
    throw std::invalid_argument("lockstep: one eps per state required");
  std::vector<double> guard(m);
  for (size_t j = 0; j < m; ++j) {
    if (states[j].size() != static_cast<size_t>(grid.cells()))
      throw std::invalid_argument("lockstep: state size does not match grid");
    guard[j] = 1.5 * std::max(spec.state_bound, solver::norm_linf(states[j]));
  }
  std::vector<std::vector<double>> next(m,
                                        std::vector<double>(states[0].size()));
  for (std::int64_t k = 0; k < noise.n_steps; ++k) {
    auto [lo, hi] = noise.events_in_step(k);
    solver::StepInputs in{noise.dt, noise.dw[static_cast<size_t>(k)],
                          std::span<const noise::JumpEvent>(
                              noise.jumps.data() + lo, hi - lo)};
    for (size_t j = 0; j < m; ++j) {
      solver::step(spec, grid, eps[j], states[j], next[j], in);
      const double peak = solver::norm_linf(next[j]);
      if (!(peak <= guard[j]))
        throw std::runtime_error(
            "lockstep: state magnitude " + std::to_string(peak) +
            " left the bound " + std::to_string(guard[j]) + " at step " +
            std::to_string(k) +
            "; the step size is too large for this problem");
      states[j].swap(next[j]);
    }
    if (after) after(k);
  }
}

}  // namespace levypde::verify::detail
