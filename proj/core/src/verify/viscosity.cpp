#include "levypde/verify/viscosity.hpp"

#include <stdexcept>

#include "levypde/noise/noise_path.hpp"
#include "levypde/solver/scheme.hpp"
#include "levypde/stats.hpp"
#include "lockstep_detail.hpp"

namespace levypde::verify {

ViscosityReport viscosity_convergence(const model::ProblemSpec& spec,
                                      const solver::Grid& grid,
                                      const std::vector<double>& eps_ladder,
                                      double t_final, int n_paths,
                                      std::uint64_t base_seed) {
  if (eps_ladder.size() < 2)
    throw std::invalid_argument("viscosity_convergence: need >= 2 rungs");
  for (size_t j = 0; j + 1 < eps_ladder.size(); ++j)
    if (!(eps_ladder[j + 1] < eps_ladder[j]))
      throw std::invalid_argument(
          "viscosity_convergence: ladder must be strictly decreasing");
  if (!(eps_ladder.back() >= 0.0))
    throw std::invalid_argument("viscosity_convergence: negative viscosity");
  if (n_paths < 1)
    throw std::invalid_argument("viscosity_convergence: n_paths < 1");

  // One step size for every rung: the largest viscosity sets the strictest
  // parabolic CFL, so every rung is stable and the noise grids coincide.
  const auto [n_steps, dt] =
      solver::step_partition(spec, grid, eps_ladder.front(), t_final);
  const std::int64_t last = n_steps;
  const double dt_k = dt;
  const size_t L = eps_ladder.size();
  const auto init = solver::sample_initial(spec, grid);

  std::vector<std::vector<double>> D(
      L - 1, std::vector<double>(static_cast<size_t>(n_paths), 0.0));

  for (int p = 0; p < n_paths; ++p) {
    auto noise = noise::generate_path(spec.mark, t_final, dt, base_seed,
                                      static_cast<std::uint64_t>(p));
    std::vector<std::vector<double>> states(L, init);
    detail::lockstep(spec, grid, eps_ladder, states, noise,
                     [&](std::int64_t k) {
                       // Left-endpoint time quadrature: t_0 (identical data)
                       // contributes nothing and t_final is excluded.
                       if (k + 1 >= last) return;
                       for (size_t q = 0; q + 1 < L; ++q)
                         D[q][static_cast<size_t>(p)] +=
                             solver::dist_l1(grid, states[q], states[q + 1]) *
                             dt_k;
                     });
  }

  ViscosityReport rep;
  rep.eps_ladder = eps_ladder;
  rep.distances.resize(L - 1);
  rep.se.resize(L - 1);
  for (size_t q = 0; q + 1 < L; ++q) {
    auto ms = stats::mean_se(D[q]);
    rep.distances[q] = ms.mean;
    rep.se[q] = ms.se;
    if (q > 0 && !(rep.distances[q] < rep.distances[q - 1]))
      rep.strictly_decreasing = false;
  }
  rep.rung_resolved.resize(L);
  for (size_t j = 0; j < L; ++j)
    rep.rung_resolved[j] =
        grid.dx() * spec.lip_flux_sum / 2.0 <= eps_ladder[j] / 4.0;
  return rep;
}

}  // namespace levypde::verify
