#include "levypde/solver/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace levypde::solver {

double stable_dt(const model::ProblemSpec& spec, const Grid& grid, double eps,
                 double t_final) {
  if (t_final <= 0.0) throw std::invalid_argument("stable_dt: t_final <= 0");
  const double dx = grid.dx();
  double dt = t_final / kMinSteps;
  if (spec.lip_flux_sum > 0.0)
    dt = std::min(dt, 0.4 * dx / spec.lip_flux_sum);
  const double par = 2.0 * spec.dim * (spec.lip_phi + eps);
  if (par > 0.0) dt = std::min(dt, 0.4 * dx * dx / par);
  return dt;
}

std::pair<std::int64_t, double> step_partition(const model::ProblemSpec& spec,
                                               const Grid& grid, double eps,
                                               double t_final,
                                               double dt_override) {
  const double dt_max =
      dt_override > 0.0 ? dt_override : stable_dt(spec, grid, eps, t_final);
  const double q = t_final / dt_max;
  auto n = static_cast<std::int64_t>(std::ceil(q * (1.0 - 1e-12) - 1e-12));
  n = std::max<std::int64_t>(1, n);
  return {n, t_final / static_cast<double>(n)};
}

namespace {

// Per-thread scratch so ensemble workers never contend on allocations.
struct Scratch {
  std::vector<double> w, fx, fy;
};
Scratch& scratch(std::int64_t cells) {
  thread_local Scratch s;
  s.w.resize(cells);
  s.fx.resize(cells);
  s.fy.resize(cells);
  return s;
}

void drift_1d(const model::ProblemSpec& spec, const Grid& g, double eps,
              std::span<const double> u, std::span<double> out,
              const StepInputs& in) {
  const int n = g.n;
  const double dx = g.dx();
  const double r1 = in.dt / dx, r2 = in.dt / (dx * dx);
  auto& s = scratch(n);
  for (int i = 0; i < n; ++i) s.w[i] = spec.phi.value(u[i]) + eps * u[i];
  // fx[i] = numerical flux through the interface between cells i and i+1.
  for (int i = 0; i < n; ++i) {
    int r = i + 1 == n ? 0 : i + 1;
    s.fx[i] = spec.flux.eo_plus(u[i], 0) + spec.flux.eo_minus(u[r], 0);
  }
  const bool jumps = spec.has_jumps();
  for (int i = 0; i < n; ++i) {
    int l = i == 0 ? n - 1 : i - 1;
    int r = i + 1 == n ? 0 : i + 1;
    double v = u[i] - r1 * (s.fx[i] - s.fx[l]) +
               r2 * (s.w[r] - 2.0 * s.w[i] + s.w[l]) +
               spec.sigma.value(u[i]) * in.dw;
    if (jumps) v -= in.dt * spec.eta_profile(u[i]) * spec.h_mass;
    out[i] = v;
  }
}

void drift_2d(const model::ProblemSpec& spec, const Grid& g, double eps,
              std::span<const double> u, std::span<double> out,
              const StepInputs& in) {
  const int n = g.n;
  const double dx = g.dx();
  const double r1 = in.dt / dx, r2 = in.dt / (dx * dx);
  const std::int64_t cells = g.cells();
  auto& s = scratch(cells);
  for (std::int64_t c = 0; c < cells; ++c)
    s.w[c] = spec.phi.value(u[c]) + eps * u[c];
  for (int j = 0; j < n; ++j) {
    const std::int64_t row = static_cast<std::int64_t>(j) * n;
    const std::int64_t up = static_cast<std::int64_t>(j + 1 == n ? 0 : j + 1) * n;
    for (int i = 0; i < n; ++i) {
      int r = i + 1 == n ? 0 : i + 1;
      s.fx[row + i] =
          spec.flux.eo_plus(u[row + i], 0) + spec.flux.eo_minus(u[row + r], 0);
      s.fy[row + i] =
          spec.flux.eo_plus(u[row + i], 1) + spec.flux.eo_minus(u[up + i], 1);
    }
  }
  const bool jumps = spec.has_jumps();
  for (int j = 0; j < n; ++j) {
    const std::int64_t row = static_cast<std::int64_t>(j) * n;
    const std::int64_t up = static_cast<std::int64_t>(j + 1 == n ? 0 : j + 1) * n;
    const std::int64_t dn = static_cast<std::int64_t>(j == 0 ? n - 1 : j - 1) * n;
    for (int i = 0; i < n; ++i) {
      int l = i == 0 ? n - 1 : i - 1;
      int r = i + 1 == n ? 0 : i + 1;
      const std::int64_t c = row + i;
      double div = (s.fx[c] - s.fx[row + l]) + (s.fy[c] - s.fy[dn + i]);
      double lap = (s.w[row + r] - 2.0 * s.w[c] + s.w[row + l]) +
                   (s.w[up + i] - 2.0 * s.w[c] + s.w[dn + i]);
      double v = u[c] - r1 * div + r2 * lap + spec.sigma.value(u[c]) * in.dw;
      if (jumps) v -= in.dt * spec.eta_profile(u[c]) * spec.h_mass;
      out[c] = v;
    }
  }
}

}  // namespace

void step(const model::ProblemSpec& spec, const Grid& grid, double eps,
          std::span<const double> in, std::span<double> out,
          const StepInputs& inputs) {
  if (in.size() != static_cast<size_t>(grid.cells()) || in.size() != out.size())
    throw std::invalid_argument("step: state size does not match grid");
  if (grid.dim == 1)
    drift_1d(spec, grid, eps, in, out, inputs);
  else
    drift_2d(spec, grid, eps, in, out, inputs);
  for (const auto& e : inputs.events) {
    const double hz = spec.jump_profile.value(e.mark);
    for (double& v : out) v += spec.eta_profile(v) * hz;
  }
}

std::vector<double> sample_initial(const model::ProblemSpec& spec,
                                   const Grid& grid, double trunc_level) {
  std::vector<double> u(grid.cells());
  if (grid.dim == 1) {
    for (int i = 0; i < grid.n; ++i) u[i] = spec.u0.value(grid.x(i));
  } else {
    for (int j = 0; j < grid.n; ++j)
      for (int i = 0; i < grid.n; ++i)
        u[grid.index(i, j)] = spec.u0.value(grid.x(i), grid.x(j));
  }
  if (trunc_level > 0.0)
    for (double& v : u) v = model::truncate(v, trunc_level);
  return u;
}

void walk(const model::ProblemSpec& spec, const Grid& grid, double eps,
          const noise::NoisePath& noise, std::vector<double>& state,
          const StepObserver& observer) {
  if (state.size() != static_cast<size_t>(grid.cells()))
    throw std::invalid_argument("walk: state size does not match grid");
  const double guard = 1.5 * std::max(spec.state_bound, norm_linf(state));
  std::vector<double> next(state.size());
  for (std::int64_t k = 0; k < noise.n_steps; ++k) {
    auto [lo, hi] = noise.events_in_step(k);
    StepInputs in{noise.dt, noise.dw[static_cast<size_t>(k)],
                  std::span<const noise::JumpEvent>(noise.jumps.data() + lo,
                                                    hi - lo)};
    step(spec, grid, eps, state, next, in);
    const double peak = norm_linf(next);
    if (!(peak <= guard))
      throw std::runtime_error(
          "walk: state magnitude " + std::to_string(peak) + " left the bound " +
          std::to_string(guard) + " at step " + std::to_string(k) +
          "; the step size is too large for this problem");
    if (observer) {
      StepRecord rec;
      rec.k = k;
      rec.t = static_cast<double>(k) * noise.dt;
      rec.dt = noise.dt;
      rec.before = state;
      rec.after = next;
      rec.dw = in.dw;
      rec.events = in.events;
      observer(rec);
    }
    state.swap(next);
  }
}

std::vector<std::int64_t> snapshot_steps(std::int64_t n_steps,
                                         int store_count) {
  std::vector<std::int64_t> sel;
  const int m = std::max(2, store_count);
  for (int j = 0; j < m; ++j) {
    auto k = static_cast<std::int64_t>(
        std::llround(static_cast<double>(j) * static_cast<double>(n_steps) /
                     (m - 1.0)));
    if (sel.empty() || sel.back() != k) sel.push_back(k);
  }
  return sel;
}

namespace {

PathSample run_sample(const model::ProblemSpec& spec, const Grid& grid,
                      double eps, double t_final, std::uint64_t base_seed,
                      std::uint64_t path_index, const SolveOptions& opt,
                      std::vector<double> initial) {
  auto [n_steps, dt] = step_partition(spec, grid, eps, t_final, opt.dt_override);

  PathSample out;
  out.grid = grid;
  out.eps = eps;
  out.dt = dt;
  out.noise = noise::generate_path(spec.mark, t_final, dt, base_seed, path_index);
  if (out.noise.n_steps != n_steps)
    throw std::logic_error("solve_path: partition/noise step mismatch");

  std::vector<std::int64_t> sel;
  if (opt.store_every_step) {
    sel.resize(static_cast<size_t>(n_steps) + 1);
    for (std::int64_t k = 0; k <= n_steps; ++k) sel[static_cast<size_t>(k)] = k;
  } else {
    sel = snapshot_steps(n_steps, opt.store_count);
  }
  out.steps = sel;
  out.times.reserve(sel.size());
  for (auto k : sel) out.times.push_back(static_cast<double>(k) * dt);
  out.snaps.reserve(sel.size());

  size_t cursor = 0;
  if (sel[cursor] == 0) {
    out.snaps.push_back(initial);
    ++cursor;
  }
  auto observer = [&](const StepRecord& rec) {
    if (cursor < sel.size() && rec.k + 1 == sel[cursor]) {
      out.snaps.emplace_back(rec.after.begin(), rec.after.end());
      ++cursor;
    }
  };
  walk(spec, grid, eps, out.noise, initial, observer);
  if (cursor != sel.size())
    throw std::logic_error("solve_path: snapshot selection incomplete");
  return out;
}

}  // namespace

PathSample solve_path(const model::ProblemSpec& spec, const Grid& grid,
                      double eps, double t_final, std::uint64_t base_seed,
                      std::uint64_t path_index, const SolveOptions& opt) {
  auto u0 = sample_initial(spec, grid, opt.trunc_level);
  return run_sample(spec, grid, eps, t_final, base_seed, path_index, opt,
                    std::move(u0));
}

PathSample solve_truncated_data(const model::ProblemSpec& spec,
                                const Grid& grid, double eps, double t_final,
                                double level, std::uint64_t base_seed,
                                std::uint64_t path_index,
                                const SolveOptions& opt) {
  SolveOptions o = opt;
  o.trunc_level = level;
  return solve_path(spec, grid, eps, t_final, base_seed, path_index, o);
}

}  // namespace levypde::solver
