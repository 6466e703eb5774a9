#include "levypde/functionals/ito_residual.hpp"

#include <cmath>
#include <stdexcept>

namespace levypde::functionals {

namespace {

void require_every_step(const solver::PathSample& path, const char* who) {
  for (size_t j = 0; j < path.steps.size(); ++j)
    if (path.steps[j] != static_cast<std::int64_t>(j))
      throw std::invalid_argument(std::string(who) +
                                  ": path must be stored every step");
}

}  // namespace

ItoResidual ito_levy_residual(const model::ProblemSpec& spec,
                              const solver::PathSample& path,
                              const model::SmoothEntropy& entropy,
                              const verify::TestFunction& psi) {
  require_every_step(path, "ito_levy_residual");
  const solver::Grid& g = path.grid;
  if (!psi.supported_away_from_boundary(g))
    throw std::invalid_argument(
        "ito_levy_residual: test function touches the boundary ring");

  const double R = spec.range_bound;
  model::CumulativeTable nu(
      [&](double r) { return entropy.d1(r) * spec.phi.deriv(r); }, R);
  model::CumulativeTable zeta0(
      [&](double r) { return entropy.d1(r) * spec.flux.deriv(r, 0); }, R);
  model::CumulativeTable zeta1;
  if (g.dim == 2)
    zeta1 = model::CumulativeTable(
        [&](double r) { return entropy.d1(r) * spec.flux.deriv(r, 1); }, R);

  const double dx = g.dx();
  const double vol = g.cell_volume();
  const double dt = path.dt;
  const double eps = path.eps;
  const bool jumps = spec.has_jumps();
  const int n = g.n;

  ItoResidual out;
  std::vector<double> s_vals(g.cells());

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

    for (std::int64_t c = 0; c < g.cells(); ++c)
      s_vals[static_cast<size_t>(c)] = entropy.value(u[static_cast<size_t>(c)]);

    for (std::int64_t c = 0; c < g.cells(); ++c) {
      const double uc = u[static_cast<size_t>(c)];
      double x, y;
      cell_xy(c, x, y);
      const double p0 = psi.value(t, x, y);
      const double s0 = s_vals[static_cast<size_t>(c)];
      const double s1 = entropy.d1(uc);
      const double s2 = entropy.d2(uc);

      out.time_term += s0 * (psi.value(tn, x, y) - p0) * vol;
      out.diffusion_term += nu(uc) * psi.laplacian(t, x, y, g.dim) * dt * vol;
      double conv = zeta0(uc) * psi.grad(0, t, x, y);
      if (g.dim == 2) conv += zeta1(uc) * psi.grad(1, t, x, y);
      out.flux_term += conv * dt * vol;

      const double sig = spec.sigma.value(uc);
      out.brownian_term += sig * s1 * p0 * dw * vol;
      out.ito_correction += 0.5 * sig * sig * s2 * p0 * dt * vol;

      if (jumps) {
        const double prof = spec.eta_profile(uc);
        double corr = 0.0, comp = 0.0;
        for (size_t q = 0; q < spec.mark.coarse_nodes.size(); ++q) {
          const double eta =
              prof * spec.jump_profile.value(spec.mark.coarse_nodes[q]);
          const double ds = entropy.value(uc + eta) - s0;
          corr += spec.mark.coarse_weights[q] * (ds - eta * s1);
          comp += spec.mark.coarse_weights[q] * ds;
        }
        out.jump_correction += corr * p0 * dt * vol;
        out.jump_martingale -= comp * p0 * dt * vol;
      }

      // Discrete Laplacian of S(u) (the eps part of the chain rule) and the
      // interface dissipation, with psi at the interface midpoints.
      if (g.dim == 1) {
        const int i = static_cast<int>(c);
        const int l = g.wrap(i - 1), r = g.wrap(i + 1);
        if (eps != 0.0) {
          const double lap_s = (s_vals[r] - 2.0 * s0 + s_vals[l]) / (dx * dx);
          out.eps_term += eps * lap_s * p0 * dt * vol;
        }
        const double ur = u[static_cast<size_t>(r)];
        const double dg =
            (spec.kirchhoff_fast(ur) - spec.kirchhoff_fast(uc)) / dx;
        const double du = (ur - uc) / dx;
        const double s2m = 0.5 * (s2 + entropy.d2(ur));
        out.dissipation += s2m * (dg * dg + eps * du * du) *
                           psi.value(t, x + 0.5 * dx, y) * dt * vol;
      } else {
        const int i = static_cast<int>(c % n), j = static_cast<int>(c / n);
        const auto cr = g.index(g.wrap(i + 1), j);
        const auto cl = g.index(g.wrap(i - 1), j);
        const auto cu = g.index(i, g.wrap(j + 1));
        const auto cd = g.index(i, g.wrap(j - 1));
        if (eps != 0.0) {
          const double lap_s = (s_vals[cr] + s_vals[cl] + s_vals[cu] +
                                s_vals[cd] - 4.0 * s0) /
                               (dx * dx);
          out.eps_term += eps * lap_s * p0 * dt * vol;
        }
        const double gc = spec.kirchhoff_fast(uc);
        {
          const double ur = u[static_cast<size_t>(cr)];
          const double dg = (spec.kirchhoff_fast(ur) - gc) / dx;
          const double du = (ur - uc) / dx;
          const double s2m = 0.5 * (s2 + entropy.d2(ur));
          out.dissipation += s2m * (dg * dg + eps * du * du) *
                             psi.value(t, x + 0.5 * dx, y) * dt * vol;
        }
        {
          const double ur = u[static_cast<size_t>(cu)];
          const double dg = (spec.kirchhoff_fast(ur) - gc) / dx;
          const double du = (ur - uc) / dx;
          const double s2m = 0.5 * (s2 + entropy.d2(ur));
          out.dissipation += s2m * (dg * dg + eps * du * du) *
                             psi.value(t, x, y + 0.5 * dx) * dt * vol;
        }
      }
    }

    // Realized jumps, evaluated at the predictable (left-endpoint) state.
    auto [lo, hi] = path.noise.events_in_step(k);
    for (size_t e = lo; e < hi; ++e) {
      const double hz = spec.jump_profile.value(path.noise.jumps[e].mark);
      for (std::int64_t c = 0; c < g.cells(); ++c) {
        const double uc = u[static_cast<size_t>(c)];
        const double eta = spec.eta_profile(uc) * hz;
        double x, y;
        cell_xy(c, x, y);
        out.jump_martingale += (entropy.value(uc + eta) -
                                s_vals[static_cast<size_t>(c)]) *
                               psi.value(t, x, y) * vol;
      }
    }
  }

  const double t_end = static_cast<double>(path.noise.n_steps) * dt;
  const auto& u0 = path.snaps.front();
  const auto& uT = path.snaps.back();
  for (std::int64_t c = 0; c < g.cells(); ++c) {
    double x, y;
    cell_xy(c, x, y);
    out.initial_term +=
        entropy.value(u0[static_cast<size_t>(c)]) * psi.value(0.0, x, y) * vol;
    out.terminal_term +=
        entropy.value(uT[static_cast<size_t>(c)]) * psi.value(t_end, x, y) * vol;
  }

  out.residual = out.time_term + out.diffusion_term + out.flux_term +
                 out.eps_term + out.brownian_term + out.ito_correction +
                 out.jump_martingale + out.jump_correction -
                 (out.dissipation - out.initial_term + out.terminal_term);
  return out;
}

}  // namespace levypde::functionals
