#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "levypde/harness/config.hpp"
#include "levypde/stats.hpp"

namespace levypde::harness {

// Deterministic worker pool over path indices: fn(path_index) writes into
// slot path_index; reductions afterwards run in index order, so every
// statistic is bit-identical for any worker count.
void parallel_for_paths(int n_paths, int workers,
                        const std::function<void(int)>& fn);

// Column-wise mean/SE over per-path rows (rows[path][col], fixed order).
struct EnsembleTable {
  std::vector<double> mean, se;
};
EnsembleTable reduce_rows(const std::vector<std::vector<double>>& rows);

// The `simulate` entry point: runs the configured ensemble, writes
//   norms.csv      t, mean ||u||_1, se, mean ||u||_2^2, se, mean max|u|
//   snapshots/path0_<k>.csv   stored snapshots of path 0
//   manifest.json
// into out_dir and returns 0, or throws on config errors.
int run_simulate(const ExperimentConfig& cfg, int workers,
                 const std::string& out_dir);

}  // namespace levypde::harness
