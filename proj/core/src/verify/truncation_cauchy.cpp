#include "levypde/verify/truncation_cauchy.hpp"

#include <algorithm>
#include <stdexcept>

#include "levypde/noise/noise_path.hpp"
#include "levypde/solver/scheme.hpp"
#include "levypde/stats.hpp"
#include "lockstep_detail.hpp"

namespace levypde::verify {

TruncationCauchyReport truncated_data_cauchy(
    const model::ProblemSpec& spec, const solver::Grid& grid, double eps,
    double t_final, const std::vector<double>& levels, int n_paths,
    std::uint64_t base_seed, double contraction_constant, int store_count) {
  if (levels.size() < 2)
    throw std::invalid_argument("truncated_data_cauchy: need >= 2 levels");
  for (size_t j = 0; j + 1 < levels.size(); ++j)
    if (!(levels[j + 1] > levels[j]))
      throw std::invalid_argument(
          "truncated_data_cauchy: levels must be strictly increasing");
  if (n_paths < 1)
    throw std::invalid_argument("truncated_data_cauchy: n_paths < 1");

  auto [n_steps, dt] = solver::step_partition(spec, grid, eps, t_final);
  const auto sel = solver::snapshot_steps(n_steps, store_count);
  const size_t L = levels.size();

  std::vector<std::vector<double>> init(L);
  for (size_t j = 0; j < L; ++j)
    init[j] = solver::sample_initial(spec, grid, levels[j]);

  TruncationCauchyReport rep;
  rep.levels = levels;
  rep.contraction_constant = contraction_constant;
  rep.pairs.resize(L - 1);
  for (size_t q = 0; q + 1 < L; ++q) {
    rep.pairs[q].n1 = levels[q];
    rep.pairs[q].n2 = levels[q + 1];
    rep.pairs[q].data_distance = solver::dist_l1(grid, init[q], init[q + 1]);
  }

  // dist[q][j][p]: pair q, stored time j, path p.
  std::vector<std::vector<std::vector<double>>> dist(
      L - 1, std::vector<std::vector<double>>(
                 sel.size(),
                 std::vector<double>(static_cast<size_t>(n_paths))));
  const std::vector<double> epses(L, eps);

  for (int p = 0; p < n_paths; ++p) {
    auto noise = noise::generate_path(spec.mark, t_final, dt, base_seed,
                                      static_cast<std::uint64_t>(p));
    auto states = init;
    size_t cursor = 0;
    if (sel[cursor] == 0) {
      for (size_t q = 0; q + 1 < L; ++q)
        dist[q][cursor][static_cast<size_t>(p)] = rep.pairs[q].data_distance;
      ++cursor;
    }
    detail::lockstep(spec, grid, epses, states, noise, [&](std::int64_t k) {
      if (cursor < sel.size() && sel[cursor] == k + 1) {
        for (size_t q = 0; q + 1 < L; ++q)
          dist[q][cursor][static_cast<size_t>(p)] =
              solver::dist_l1(grid, states[q], states[q + 1]);
        ++cursor;
      }
    });
    if (cursor != sel.size())
      throw std::logic_error(
          "truncated_data_cauchy: snapshot selection incomplete");
  }

  for (size_t q = 0; q + 1 < L; ++q) {
    auto& pair = rep.pairs[q];
    for (size_t j = 0; j < sel.size(); ++j) {
      auto ms = stats::mean_se(dist[q][j]);
      if (ms.mean > pair.sup_distance) {
        pair.sup_distance = ms.mean;
        pair.se_at_sup = ms.se;
      }
    }
    pair.bounded =
        pair.sup_distance <=
        contraction_constant * pair.data_distance + 5.0 * pair.se_at_sup;
    rep.all_bounded = rep.all_bounded && pair.bounded;
    if (q > 0 &&
        pair.sup_distance > rep.pairs[q - 1].sup_distance + 1e-12)
      rep.monotone = false;
  }
  return rep;
}

}  // namespace levypde::verify
