#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace levypde::solver {

// Uniform periodic grid on [-half_width, half_width)^d, d in {1, 2},
// n cells per axis, cell centers at -half_width + (i + 1/2) dx.
struct Grid {
  int dim = 1;
  int n = 64;
  double half_width = 2.0;

  double dx() const { return 2.0 * half_width / n; }
  std::int64_t cells() const {
    return dim == 1 ? n : static_cast<std::int64_t>(n) * n;
  }
  double x(int i) const { return -half_width + (i + 0.5) * dx(); }
  std::int64_t index(int i, int j = 0) const {
    return static_cast<std::int64_t>(j) * n + i;
  }
  int wrap(int i) const {
    int r = i % n;
    return r < 0 ? r + n : r;
  }
  double cell_volume() const;  // dx^d
};

// Discrete norms with the cell-volume weight, accumulated in index order so
// ensemble statistics are bit-reproducible.
double norm_l1(const Grid& g, std::span<const double> u);
double norm_l2sq(const Grid& g, std::span<const double> u);
double norm_linf(std::span<const double> u);
double dist_l1(const Grid& g, std::span<const double> u,
               std::span<const double> v);

}  // namespace levypde::solver
