#include "levypde/functionals/defect_measure.hpp"

#include <cmath>
#include <stdexcept>

namespace levypde::functionals {

namespace {

void require_every_step(const solver::PathSample& path, const char* who) {
  for (size_t j = 0; j < path.steps.size(); ++j)
    if (path.steps[j] != static_cast<std::int64_t>(j))
      throw std::invalid_argument(std::string(who) +
                                  ": path must be stored every step");
  if (path.snaps.size() != static_cast<size_t>(path.noise.n_steps) + 1)
    throw std::invalid_argument(std::string(who) +
                                ": snapshot count does not match the walk");
}

}  // namespace

double defect_density_at(const model::ProblemSpec& spec,
                         const solver::Grid& grid, std::span<const double> u,
                         std::int64_t cell, double eps, double l, double delta,
                         double weight) {
  const double uc = u[static_cast<size_t>(cell)];
  const double au = std::abs(uc);
  if (!(au > l && au < l + delta)) return 0.0;

  const double dx = grid.dx();
  const double gc = spec.kirchhoff_fast(uc);
  double grad_g = 0.0, grad_u = 0.0;
  if (grid.dim == 1) {
    const int i = static_cast<int>(cell);
    const double ur = u[static_cast<size_t>(grid.wrap(i + 1))];
    const double dg = (spec.kirchhoff_fast(ur) - gc) / dx;
    const double du = (ur - uc) / dx;
    grad_g = dg * dg;
    grad_u = du * du;
  } else {
    const int n = grid.n;
    const int i = static_cast<int>(cell % n), j = static_cast<int>(cell / n);
    const double ux = u[grid.index(grid.wrap(i + 1), j)];
    const double uy = u[grid.index(i, grid.wrap(j + 1))];
    const double dgx = (spec.kirchhoff_fast(ux) - gc) / dx;
    const double dgy = (spec.kirchhoff_fast(uy) - gc) / dx;
    const double dux = (ux - uc) / dx, duy = (uy - uc) / dx;
    grad_g = dgx * dgx + dgy * dgy;
    grad_u = dux * dux + duy * duy;
  }
  const double s = spec.sigma.value(uc);
  return (weight / delta) * (grad_g + eps * grad_u + 0.5 * s * s);
}

DefectMeasure defect_measure(const model::ProblemSpec& spec,
                             const solver::PathSample& path, double l,
                             double delta, double weight) {
  require_every_step(path, "defect_measure");
  DefectMeasure mu;
  mu.l = l;
  mu.delta = delta;
  mu.weight = weight;
  mu.eps = path.eps;
  mu.dt = path.dt;
  const double cell_dt = path.grid.cell_volume() * path.dt;
  for (std::int64_t k = 0; k < path.noise.n_steps; ++k) {
    const auto& u = path.snaps[static_cast<size_t>(k)];
    for (std::int64_t c = 0; c < path.grid.cells(); ++c) {
      double d = defect_density_at(spec, path.grid, u, c, path.eps, l, delta,
                                   weight);
      if (d > 0.0) {
        mu.entries.push_back({k, c, d});
        mu.total_mass += d * cell_dt;
      }
    }
  }
  return mu;
}

DefectAccumulator::DefectAccumulator(const model::ProblemSpec& spec,
                                     const solver::Grid& grid, double eps,
                                     double l, double delta, double weight,
                                     bool keep_entries)
    : spec_(&spec),
      grid_(grid),
      eps_(eps),
      l_(l),
      delta_(delta),
      weight_(weight),
      keep_entries_(keep_entries) {}

void DefectAccumulator::on_step(const solver::StepRecord& rec) {
  const double cell_dt = grid_.cell_volume() * rec.dt;
  for (std::int64_t c = 0; c < grid_.cells(); ++c) {
    double d = defect_density_at(*spec_, grid_, rec.before, c, eps_, l_,
                                 delta_, weight_);
    if (d > 0.0) {
      total_mass_ += d * cell_dt;
      if (keep_entries_) entries_.push_back({rec.k, c, d});
    }
  }
}

}  // namespace levypde::functionals
