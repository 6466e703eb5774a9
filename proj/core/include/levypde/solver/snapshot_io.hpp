#pragma once

#include <span>
#include <string>
#include <vector>

#include "levypde/solver/grid.hpp"

namespace levypde::solver {

// Snapshot file format: one CSV header line "n,d,dx,time", then the cell
// values in row-major order (d=1: one value per line; d=2: one grid row per
// line).  Values are printed with 17 significant digits so a parse of an
// emit reproduces every double bit-for-bit.
struct SnapshotData {
  int n = 0;
  int d = 1;
  double dx = 0.0;
  double time = 0.0;
  std::vector<double> values;
};

void write_snapshot_csv(const std::string& path, const Grid& grid, double time,
                        std::span<const double> values);
SnapshotData read_snapshot_csv(const std::string& path);

// 17-significant-digit formatting shared by every numeric writer.
std::string format_double(double x);

}  // namespace levypde::solver
