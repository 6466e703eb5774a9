#pragma once

#include <functional>
#include <span>
#include <vector>

#include "levypde/model/problem_spec.hpp"
#include "levypde/noise/noise_path.hpp"
#include "levypde/solver/grid.hpp"

namespace levypde::solver {

// Largest stable explicit step: CFL fractions 0.4 on both the hyperbolic
// rate L_f/dx and the parabolic rate 2 d (L_Phi + eps)/dx^2.  When both
// rates vanish (no flux, no diffusion) the step is capped only by the
// output cadence, t_final / kMinSteps.
inline constexpr int kMinSteps = 16;
double stable_dt(const model::ProblemSpec& spec, const Grid& grid, double eps,
                 double t_final);

// Noise increments consumed by one explicit step.
struct StepInputs {
  double dt = 0.0;
  double dw = 0.0;  // Brownian increment of this step (one path, all cells)
  std::span<const noise::JumpEvent> events;  // jumps inside this step
};

// One explicit update of the viscous scheme:
//   v_i = u_i - dt * D^-(EO flux) + dt * lap_h(Phi(u_i) + eps u_i)
//         + sigma(u_i) dW - dt * compensator(u_i),
// then each jump event applies v <- v + eta(v; z) over the whole grid, in
// event order (first-order splitting: jumps land after drift/diffusion).
void step(const model::ProblemSpec& spec, const Grid& grid, double eps,
          std::span<const double> in, std::span<double> out,
          const StepInputs& inputs);

// Initial data sampled at cell centers; optional truncation level for the
// truncated-data problem (level <= 0 means untruncated).
std::vector<double> sample_initial(const model::ProblemSpec& spec,
                                   const Grid& grid, double trunc_level = 0.0);

// Everything a streaming functional needs from one step: the states on both
// ends, the noise used, and the clock.
struct StepRecord {
  std::int64_t k = 0;
  double t = 0.0;   // time at the start of the step
  double dt = 0.0;
  std::span<const double> before;
  std::span<const double> after;
  double dw = 0.0;
  std::span<const noise::JumpEvent> events;
};
using StepObserver = std::function<void(const StepRecord&)>;

// Runs the explicit walk over a realized noise path, invoking the observer
// after every step.  Returns the terminal state in `state`.
void walk(const model::ProblemSpec& spec, const Grid& grid, double eps,
          const noise::NoisePath& noise, std::vector<double>& state,
          const StepObserver& observer = nullptr);

// Stored trajectory of one path: snapshots at selected steps plus the noise
// that drove them.  Snapshot 0 is always t = 0 and the last is t = T.
struct PathSample {
  Grid grid;
  double eps = 0.0;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<std::int64_t> steps;
  std::vector<std::vector<double>> snaps;
  noise::NoisePath noise;
};

struct SolveOptions {
  int store_count = 65;          // evenly spaced snapshots (incl. endpoints)
  bool store_every_step = false; // band/residual functionals need every step
  double trunc_level = 0.0;      // truncated-data problem when > 0
  double dt_override = 0.0;      // > 0 replaces stable_dt (still exact T/n)
};

PathSample solve_path(const model::ProblemSpec& spec, const Grid& grid,
                      double eps, double t_final, std::uint64_t base_seed,
                      std::uint64_t path_index, const SolveOptions& opt = {});

PathSample solve_truncated_data(const model::ProblemSpec& spec,
                                const Grid& grid, double eps, double t_final,
                                double level, std::uint64_t base_seed,
                                std::uint64_t path_index,
                                const SolveOptions& opt = {});

// Exact step count / step size used by solve_path for a horizon t_final.
std::pair<std::int64_t, double> step_partition(const model::ProblemSpec& spec,
                                               const Grid& grid, double eps,
                                               double t_final,
                                               double dt_override = 0.0);

// The store_count evenly spaced step indices (deduplicated, endpoints always
// included) shared by every stored-trajectory consumer.
std::vector<std::int64_t> snapshot_steps(std::int64_t n_steps, int store_count);

}  // namespace levypde::solver
