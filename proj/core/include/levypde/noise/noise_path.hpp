#pragma once

#include <cstdint>
#include <vector>

#include "levypde/model/problem_spec.hpp"

namespace levypde::noise {

// One realized jump of the driving compensated Poisson noise.
struct JumpEvent {
  std::int64_t step = 0;  // index of the time step containing the jump
  double time = 0.0;      // exact arrival time in (0, T]
  double mark = 0.0;      // z in E
};

// A realized driving path on a fixed step grid: Brownian increments per step
// plus the finite list of jump events, fully determined by
// (base_seed, path_index).
struct NoisePath {
  double dt = 0.0;
  std::int64_t n_steps = 0;
  std::uint64_t base_seed = 0;
  std::uint64_t path_index = 0;
  std::vector<double> dw;          // size n_steps, ~ N(0, dt)
  std::vector<JumpEvent> jumps;    // sorted by time

  // Half-open event range [first, last) for a step, assuming `jumps` sorted.
  std::pair<std::size_t, std::size_t> events_in_step(std::int64_t k) const;
};

// Draws the path: Brownian increments from the kBrownian stream, jump
// arrivals as exponential inter-arrival times (rate = mark.rate) from
// kJumpTime, marks by inverse CDF from kJumpMark.  Throws if dt <= 0,
// dt > T, or T does not resolve to a positive whole number of steps.
NoisePath generate_path(const model::MarkMeasure& mark, double T, double dt,
                        std::uint64_t base_seed, std::uint64_t path_index);

// Compensator drift c(u) = int_E eta(u; z) m(dz).  Separable catalog jumps
// make this profile(u) * int_E h dm with the mass from the fine mark table.
double compensator(const model::ProblemSpec& spec, double u);

}  // namespace levypde::noise
