#include "levypde/solver/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace levypde::solver {

double Grid::cell_volume() const {
  double v = dx();
  return dim == 1 ? v : v * v;
}

double norm_l1(const Grid& g, std::span<const double> u) {
  double s = 0.0;
  for (double v : u) s += std::abs(v);
  return s * g.cell_volume();
}

double norm_l2sq(const Grid& g, std::span<const double> u) {
  double s = 0.0;
  for (double v : u) s += v * v;
  return s * g.cell_volume();
}

double norm_linf(std::span<const double> u) {
  double s = 0.0;
  for (double v : u) s = std::max(s, std::abs(v));
  return s;
}

double dist_l1(const Grid& g, std::span<const double> u,
               std::span<const double> v) {
  if (u.size() != v.size())
    throw std::invalid_argument("dist_l1: size mismatch");
  double s = 0.0;
  for (size_t i = 0; i < u.size(); ++i) s += std::abs(u[i] - v[i]);
  return s * g.cell_volume();
}

}  // namespace levypde::solver
