#pragma once

#include <cmath>
#include <span>

namespace levypde::stats {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  int n = 0;
};

// Fixed-order two-pass mean / standard error: reductions run in index order
// so results are bit-identical regardless of how the samples were produced.
inline MeanSe mean_se(std::span<const double> xs) {
  MeanSe r;
  r.n = static_cast<int>(xs.size());
  if (r.n == 0) return r;
  double s = 0.0;
  for (double x : xs) s += x;
  r.mean = s / r.n;
  if (r.n < 2) return r;
  double q = 0.0;
  for (double x : xs) q += (x - r.mean) * (x - r.mean);
  r.se = std::sqrt(q / (static_cast<double>(r.n) * (r.n - 1)));
  return r;
}

}  // namespace levypde::stats
