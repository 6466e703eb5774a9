#include "levypde/harness/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "levypde/harness/manifest.hpp"
#include "levypde/solver/scheme.hpp"
#include "levypde/solver/snapshot_io.hpp"

namespace levypde::harness {

void parallel_for_paths(int n_paths, int workers,
                        const std::function<void(int)>& fn) {
  if (n_paths <= 0) return;
  if (workers <= 0) workers = 1;
  workers = std::min(workers, n_paths);
  if (workers == 1) {
    for (int p = 0; p < n_paths; ++p) fn(p);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int p = next.fetch_add(1); p < n_paths; p = next.fetch_add(1))
          fn(p);
      } catch (...) {
        errors[static_cast<size_t>(w)] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

EnsembleTable reduce_rows(const std::vector<std::vector<double>>& rows) {
  EnsembleTable t;
  if (rows.empty())
    throw std::invalid_argument("reduce_rows: no rows");
  const size_t cols = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != cols)
      throw std::invalid_argument("reduce_rows: ragged rows");
  t.mean.resize(cols);
  t.se.resize(cols);
  std::vector<double> col(rows.size());
  for (size_t c = 0; c < cols; ++c) {
    for (size_t p = 0; p < rows.size(); ++p) col[p] = rows[p][c];
    auto ms = stats::mean_se(col);
    t.mean[c] = ms.mean;
    t.se[c] = ms.se;
  }
  return t;
}

int run_simulate(const ExperimentConfig& cfg, int workers,
                 const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto spec = build_problem(cfg);
  const auto grid = build_grid(cfg);
  const double eps = cfg.get_double("solver.eps", 0.05);
  const double t_final = cfg.get_double("solver.t_final", 0.5);
  if (t_final < 0.0)
    throw std::invalid_argument("solver.t_final must be >= 0");
  const int n_paths = static_cast<int>(cfg.get_int("ensemble.n_paths", 1));
  if (n_paths < 1)
    throw std::invalid_argument("ensemble.n_paths must be >= 1");
  const auto base_seed =
      static_cast<std::uint64_t>(cfg.get_int("ensemble.base_seed", 1));
  solver::SolveOptions opt;
  opt.store_count = static_cast<int>(cfg.get_int("output.store_count", 33));
  opt.store_every_step = cfg.get_int("output.store_every_step", 0) != 0;
  opt.trunc_level = cfg.get_double("solver.trunc_level", 0.0);
  opt.dt_override = cfg.get_double("solver.dt_override", 0.0);

  std::filesystem::create_directories(out_dir + "/snapshots");

  std::vector<std::vector<double>> rows(static_cast<size_t>(n_paths));
  solver::PathSample sample0;

  if (t_final == 0.0) {
    // Zero-horizon run: the sampled data is the whole trajectory.
    auto u0 = solver::sample_initial(spec, grid, opt.trunc_level);
    for (auto& row : rows)
      row = {solver::norm_l1(grid, u0), solver::norm_l2sq(grid, u0),
             solver::norm_linf(u0)};
    sample0.grid = grid;
    sample0.eps = eps;
    sample0.times = {0.0};
    sample0.steps = {0};
    sample0.snaps = {std::move(u0)};
  } else {
    parallel_for_paths(n_paths, workers, [&](int p) {
      try {
        auto s = solver::solve_path(spec, grid, eps, t_final, base_seed,
                                    static_cast<std::uint64_t>(p), opt);
        auto& row = rows[static_cast<size_t>(p)];
        row.reserve(3 * s.snaps.size());
        for (const auto& snap : s.snaps) {
          row.push_back(solver::norm_l1(grid, snap));
          row.push_back(solver::norm_l2sq(grid, snap));
          row.push_back(solver::norm_linf(snap));
        }
        if (p == 0) sample0 = std::move(s);
      } catch (const std::exception& ex) {
        throw std::runtime_error("path " + std::to_string(p) + " (base_seed " +
                                 std::to_string(base_seed) +
                                 ") aborted: " + ex.what());
      }
    });
  }

  const auto table = reduce_rows(rows);
  const auto& times = sample0.times;

  RunManifest manifest = make_manifest(cfg, workers);

  {
    std::ofstream norms(out_dir + "/norms.csv", std::ios::binary);
    if (!norms)
      throw std::runtime_error("simulate: cannot write to " + out_dir);
    norms << "t,mean_l1,se_l1,mean_l2sq,se_l2sq,mean_linf\n";
    for (size_t j = 0; j < times.size(); ++j) {
      norms << solver::format_double(times[j]) << ','
            << solver::format_double(table.mean[3 * j]) << ','
            << solver::format_double(table.se[3 * j]) << ','
            << solver::format_double(table.mean[3 * j + 1]) << ','
            << solver::format_double(table.se[3 * j + 1]) << ','
            << solver::format_double(table.mean[3 * j + 2]) << '\n';
    }
  }
  record_file(manifest, out_dir, "norms.csv");

  // Path-0 snapshots at the evenly spaced selection even when every step was
  // stored, so the file inventory stays bounded.
  std::vector<std::int64_t> dump_steps = sample0.steps;
  if (opt.store_every_step && !sample0.steps.empty())
    dump_steps = solver::snapshot_steps(sample0.steps.back(), opt.store_count);
  for (std::int64_t step : dump_steps) {
    const auto it =
        std::find(sample0.steps.begin(), sample0.steps.end(), step);
    const size_t j = static_cast<size_t>(it - sample0.steps.begin());
    const std::string rel = "snapshots/path0_" + std::to_string(step) + ".csv";
    solver::write_snapshot_csv(out_dir + "/" + rel, grid, sample0.times[j],
                               sample0.snaps[j]);
    record_file(manifest, out_dir, rel);
  }

  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(manifest, out_dir);
  return 0;
}

}  // namespace levypde::harness
