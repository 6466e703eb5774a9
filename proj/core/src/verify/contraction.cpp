#include "levypde/verify/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levypde/noise/noise_path.hpp"
#include "levypde/solver/scheme.hpp"
#include "levypde/stats.hpp"
#include "lockstep_detail.hpp"

namespace levypde::verify {

ContractionCurve contraction_check(const model::ProblemSpec& spec,
                                   const model::InitialData& u0,
                                   const model::InitialData& v0,
                                   const solver::Grid& grid, double eps,
                                   double t_final, int n_paths,
                                   std::uint64_t base_seed,
                                   const ContractionOptions& opt) {
  if (n_paths < 1)
    throw std::invalid_argument("contraction_check: n_paths < 1");
  auto [n_steps, dt] =
      solver::step_partition(spec, grid, eps, t_final, opt.dt_override);
  const auto sel = solver::snapshot_steps(n_steps, opt.store_count);

  const auto a0 = detail::sample_data(u0, grid);
  const auto b0 = detail::sample_data(v0, grid);
  const double d0 = solver::dist_l1(grid, a0, b0);
  if (!(d0 > 0.0))
    throw std::invalid_argument(
        "contraction_check: initial data coincide on the grid");

  ContractionCurve out;
  out.initial_distance = d0;
  out.times.resize(sel.size());
  for (size_t j = 0; j < sel.size(); ++j)
    out.times[j] =
        sel[j] == n_steps ? t_final : static_cast<double>(sel[j]) * dt;

  std::vector<std::vector<double>> ratios(
      sel.size(), std::vector<double>(static_cast<size_t>(n_paths)));
  const std::vector<double> epses{eps, eps};

  for (int p = 0; p < n_paths; ++p) {
    auto noise = noise::generate_path(spec.mark, t_final, dt, base_seed,
                                      static_cast<std::uint64_t>(p));
    std::vector<std::vector<double>> states{a0, b0};
    size_t cursor = 0;
    if (sel[cursor] == 0) ratios[cursor++][static_cast<size_t>(p)] = 1.0;
    double prev = d0;
    detail::lockstep(spec, grid, epses, states, noise, [&](std::int64_t k) {
      const double dist = solver::dist_l1(grid, states[0], states[1]);
      out.max_step_drift = std::max(out.max_step_drift, dist - prev);
      prev = dist;
      if (cursor < sel.size() && sel[cursor] == k + 1)
        ratios[cursor++][static_cast<size_t>(p)] = dist / d0;
    });
    if (cursor != sel.size())
      throw std::logic_error("contraction_check: snapshot selection incomplete");
  }

  out.mean_ratio.resize(sel.size());
  out.se.resize(sel.size());
  for (size_t j = 0; j < sel.size(); ++j) {
    auto ms = stats::mean_se(ratios[j]);
    out.mean_ratio[j] = ms.mean;
    out.se[j] = ms.se;
    out.sup_ratio = std::max(out.sup_ratio, ms.mean);
    if (out.times[j] > 0.0 && ms.mean > 1.0)
      out.growth_rate =
          std::max(out.growth_rate, std::log(ms.mean) / out.times[j]);
  }
  return out;
}

}  // namespace levypde::verify
