#include "levypde/verify/entropy_residual.hpp"

#include <cmath>
#include <stdexcept>

#include "levypde/functionals/defect_measure.hpp"
#include "levypde/stats.hpp"

namespace levypde::verify {

double residual_budget(double budget_c, double dx, double dt) {
  return budget_c * (dx + std::sqrt(dt));
}

std::vector<double> kruzkov_constants(double span, int count) {
  if (count < 2) throw std::invalid_argument("kruzkov_constants: count < 2");
  std::vector<double> c(count);
  for (int j = 0; j < count; ++j)
    c[j] = -span + 2.0 * span * j / (count - 1.0);
  return c;
}

namespace {

struct PathTerms {
  double time = 0.0, diffusion = 0.0, flux = 0.0;
  double brownian = 0.0, ito = 0.0;
  double jump_mart = 0.0, jump_corr = 0.0;
  double dissipation = 0.0, initial = 0.0, measure = 0.0;
  double residual() const {
    return time + diffusion + flux + brownian + ito + jump_mart + jump_corr -
           dissipation + initial + measure;
  }
};

PathTerms path_terms(const model::ProblemSpec& spec,
                     const solver::PathSample& path,
                     const model::EntropyTriple& triple, const TestFunction& psi,
                     const MeasureParams& mp) {
  const solver::Grid& g = path.grid;
  const double dx = g.dx();
  const double vol = g.cell_volume();
  const double dt = path.dt;
  const double l = mp.l;
  const bool jumps = spec.has_jumps();
  const int n = g.n;
  const auto& beta = triple.beta;

  PathTerms out;
  auto cell_xy = [&](std::int64_t c, double& x, double& y) {
    if (g.dim == 1) {
      x = g.x(static_cast<int>(c));
      y = 0.0;
    } else {
      x = g.x(static_cast<int>(c % n));
      y = g.x(static_cast<int>(c / n));
    }
  };

  for (std::int64_t k = 0; k < path.noise.n_steps; ++k) {
    const auto& u = path.snaps[static_cast<size_t>(k)];
    const double t = static_cast<double>(k) * dt;
    const double tn = t + dt;
    const double dw = path.noise.dw[static_cast<size_t>(k)];

    for (std::int64_t c = 0; c < g.cells(); ++c) {
      const double uc = u[static_cast<size_t>(c)];
      const double v = model::truncate(uc, l);
      double x, y;
      cell_xy(c, x, y);
      const double p0 = psi.value(t, x, y);

      out.time += beta.value(v) * (psi.value(tn, x, y) - p0) * vol;
      out.diffusion += triple.nu_at(v) * psi.laplacian(t, x, y, g.dim) * dt * vol;
      double conv = triple.zeta_at(v, 0) * psi.grad(0, t, x, y);
      if (g.dim == 2) conv += triple.zeta_at(v, 1) * psi.grad(1, t, x, y);
      out.flux += conv * dt * vol;

      const double sig = spec.sigma.value(v);
      out.brownian += sig * beta.d1(v) * p0 * dw * vol;
      out.ito += 0.5 * sig * sig * beta.d2(v) * p0 * dt * vol;

      if (jumps) {
        const double prof = spec.eta_profile(v);
        const double bv = beta.value(v);
        double corr = 0.0, comp = 0.0;
        for (size_t q = 0; q < spec.mark.coarse_nodes.size(); ++q) {
          const double eta =
              prof * spec.jump_profile.value(spec.mark.coarse_nodes[q]);
          const double ds = beta.value(v + eta) - bv;
          corr += spec.mark.coarse_weights[q] * (ds - eta * beta.d1(v));
          comp += spec.mark.coarse_weights[q] * ds;
        }
        out.jump_corr += corr * p0 * dt * vol;
        out.jump_mart -= comp * p0 * dt * vol;
      }

      // Interface dissipation of the truncated state, psi at midpoints.
      if (g.dim == 1) {
        const int r = g.wrap(static_cast<int>(c) + 1);
        const double vr = model::truncate(u[static_cast<size_t>(r)], l);
        const double dg =
            (spec.kirchhoff_fast(vr) - spec.kirchhoff_fast(v)) / dx;
        const double b2m = 0.5 * (beta.d2(v) + beta.d2(vr));
        out.dissipation +=
            b2m * dg * dg * psi.value(t, x + 0.5 * dx, y) * dt * vol;
      } else {
        const int i = static_cast<int>(c % n), j = static_cast<int>(c / n);
        const double gc = spec.kirchhoff_fast(v);
        {
          const double vr = model::truncate(
              u[static_cast<size_t>(g.index(g.wrap(i + 1), j))], l);
          const double dg = (spec.kirchhoff_fast(vr) - gc) / dx;
          const double b2m = 0.5 * (beta.d2(v) + beta.d2(vr));
          out.dissipation +=
              b2m * dg * dg * psi.value(t, x + 0.5 * dx, y) * dt * vol;
        }
        {
          const double vr = model::truncate(
              u[static_cast<size_t>(g.index(i, g.wrap(j + 1)))], l);
          const double dg = (spec.kirchhoff_fast(vr) - gc) / dx;
          const double b2m = 0.5 * (beta.d2(v) + beta.d2(vr));
          out.dissipation +=
              b2m * dg * dg * psi.value(t, x, y + 0.5 * dx) * dt * vol;
        }
      }

      // Truncation-defect allowance on the raw state.
      const double dens = functionals::defect_density_at(
          spec, g, u, c, path.eps, l, mp.delta, mp.weight);
      if (dens > 0.0) out.measure += dens * p0 * dt * vol;
    }

    // Realized jumps at the predictable state.
    auto [lo, hi] = path.noise.events_in_step(k);
    for (size_t e = lo; e < hi; ++e) {
      const double hz = spec.jump_profile.value(path.noise.jumps[e].mark);
      for (std::int64_t c = 0; c < g.cells(); ++c) {
        const double v = model::truncate(u[static_cast<size_t>(c)], l);
        double x, y;
        cell_xy(c, x, y);
        out.jump_mart += (beta.value(v + spec.eta_profile(v) * hz) -
                          beta.value(v)) *
                         psi.value(t, x, y) * vol;
      }
    }
  }

  const auto& u0 = path.snaps.front();
  for (std::int64_t c = 0; c < g.cells(); ++c) {
    double x, y;
    cell_xy(c, x, y);
    out.initial += beta.value(model::truncate(u0[static_cast<size_t>(c)], l)) *
                   psi.value(0.0, x, y) * vol;
  }
  return out;
}

}  // namespace

ResidualReport renormalized_residual(const model::ProblemSpec& spec,
                                     std::span<const solver::PathSample> paths,
                                     const model::EntropyTriple& triple,
                                     const TestFunction& psi,
                                     const MeasureParams& measure,
                                     double budget_c) {
  if (paths.empty())
    throw std::invalid_argument("renormalized_residual: no paths");
  if (triple.slope_bound > measure.weight + 1e-9)
    throw std::invalid_argument(
        "renormalized_residual: measure weight below sup |beta'|");
  if (spec.has_jumps() && !triple.zero_slope_at_origin)
    throw std::invalid_argument(
        "renormalized_residual: jump noise requires beta'(0) = 0");
  if (measure.delta <= 0.0)
    throw std::invalid_argument("renormalized_residual: delta <= 0");
  for (const auto& path : paths) {
    for (size_t j = 0; j < path.steps.size(); ++j)
      if (path.steps[j] != static_cast<std::int64_t>(j))
        throw std::invalid_argument(
            "renormalized_residual: paths must be stored every step");
    if (!psi.supported_away_from_boundary(path.grid))
      throw std::invalid_argument(
          "renormalized_residual: test function touches the boundary ring");
  }

  std::vector<double> residuals(paths.size());
  ResidualReport rep;
  rep.label = psi.label;
  for (size_t p = 0; p < paths.size(); ++p) {
    auto terms = path_terms(spec, paths[p], triple, psi, measure);
    residuals[p] = terms.residual();
    const double w = 1.0 / static_cast<double>(paths.size());
    rep.time_term += w * terms.time;
    rep.diffusion_term += w * terms.diffusion;
    rep.flux_term += w * terms.flux;
    rep.brownian_term += w * terms.brownian;
    rep.ito_correction += w * terms.ito;
    rep.jump_martingale += w * terms.jump_mart;
    rep.jump_correction += w * terms.jump_corr;
    rep.dissipation += w * terms.dissipation;
    rep.initial_term += w * terms.initial;
    rep.measure_term += w * terms.measure;
  }
  auto ms = stats::mean_se(residuals);
  rep.mean = ms.mean;
  rep.se = ms.se;
  rep.budget = residual_budget(budget_c, paths[0].grid.dx(), paths[0].dt);
  rep.pass = rep.mean >= -(rep.budget + 5.0 * rep.se);
  return rep;
}

}  // namespace levypde::verify
