#include "levypde/verify/gronwall.hpp"

#include <cmath>
#include <stdexcept>

#include "levypde/noise/noise_path.hpp"
#include "levypde/solver/scheme.hpp"
#include "levypde/stats.hpp"
#include "lockstep_detail.hpp"

namespace levypde::verify {

GronwallReport gronwall_stability(const model::ProblemSpec& spec,
                                  const solver::Grid& grid, double eps,
                                  double t_final, double trunc_level,
                                  int n_paths, std::uint64_t base_seed,
                                  double rate, double c_data, double floor,
                                  int store_count) {
  if (!(trunc_level > 0.0))
    throw std::invalid_argument("gronwall_stability: trunc_level <= 0");
  if (n_paths < 1)
    throw std::invalid_argument("gronwall_stability: n_paths < 1");
  const auto [n_steps, dt] = solver::step_partition(spec, grid, eps, t_final);
  const auto sel = solver::snapshot_steps(n_steps, store_count);

  const auto full0 = solver::sample_initial(spec, grid);
  const auto trunc0 = solver::sample_initial(spec, grid, trunc_level);

  GronwallReport rep;
  rep.data_distance = solver::dist_l1(grid, trunc0, full0);
  rep.rate = rate;
  rep.times.resize(sel.size());
  for (size_t j = 0; j < sel.size(); ++j)
    rep.times[j] =
        sel[j] == n_steps ? t_final : static_cast<double>(sel[j]) * dt;

  std::vector<std::vector<double>> dist(
      sel.size(), std::vector<double>(static_cast<size_t>(n_paths)));
  const std::vector<double> epses{eps, eps};

  for (int p = 0; p < n_paths; ++p) {
    auto noise = noise::generate_path(spec.mark, t_final, dt, base_seed,
                                      static_cast<std::uint64_t>(p));
    std::vector<std::vector<double>> states{trunc0, full0};
    size_t cursor = 0;
    if (sel[cursor] == 0)
      dist[cursor++][static_cast<size_t>(p)] = rep.data_distance;
    detail::lockstep(spec, grid, epses, states, noise, [&](std::int64_t k) {
      if (cursor < sel.size() && sel[cursor] == k + 1)
        dist[cursor++][static_cast<size_t>(p)] =
            solver::dist_l1(grid, states[0], states[1]);
    });
    if (cursor != sel.size())
      throw std::logic_error("gronwall_stability: snapshot selection incomplete");
  }

  rep.lhs.resize(sel.size());
  rep.se.resize(sel.size());
  rep.rhs.resize(sel.size());
  rep.margin.resize(sel.size());
  // Rounding allowance: with rate = floor = 0 the envelope meets the data
  // distance exactly, and the summed L1 distances carry accumulated
  // floating-point error at machine scale.
  const double rounding = 1e-12 * std::max(1.0, rep.data_distance);
  for (size_t j = 0; j < sel.size(); ++j) {
    auto ms = stats::mean_se(dist[j]);
    rep.lhs[j] = ms.mean;
    rep.se[j] = ms.se;
    rep.rhs[j] = std::exp(rate * rep.times[j]) * (c_data * rep.data_distance) +
                 5.0 * ms.se + floor + rounding;
    rep.margin[j] = rep.rhs[j] - rep.lhs[j];
    if (rep.margin[j] < 0.0) rep.pass = false;
  }
  return rep;
}

}  // namespace levypde::verify
