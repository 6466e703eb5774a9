#include "levypde/model/entropy_triple.hpp"

#include <cmath>
#include <stdexcept>

namespace levypde::model {

EntropyTriple make_entropy_triple(const ProblemSpec& spec,
                                  const SmoothEntropy& beta, double range,
                                  int nodes_per_unit) {
  if (!(range > 0.0))
    throw std::invalid_argument("entropy triple needs range > 0");
  EntropyTriple t;
  t.beta = beta;
  t.axes = spec.dim;
  t.range = range;
  for (int k = 0; k < spec.dim; ++k) {
    const FluxCoeff& f = spec.flux;
    auto b1 = beta.d1;
    t.zeta[k] = CumulativeTable(
        [b1, f, k](double s) { return b1(s) * f.deriv(s, k); }, range,
        nodes_per_unit);
  }
  {
    const DiffusionCoeff& phi = spec.phi;
    auto b1 = beta.d1;
    t.nu = CumulativeTable(
        [b1, phi](double s) { return b1(s) * phi.deriv(s); }, range,
        nodes_per_unit);
  }

  // flags and the slope bound from a node-density scan of beta
  long n = std::max<long>(64, std::lround(std::ceil(range * nodes_per_unit)));
  double h = range / n;
  double kmax = 0.0;
  bool convex = true;
  for (long j = -n; j <= n; ++j) {
    double r = j * h;
    kmax = std::max(kmax, std::abs(beta.d1(r)));
    if (beta.d2(r) < -1e-9) convex = false;
  }
  t.slope_bound = kmax;
  t.convex = convex;
  t.zero_slope_at_origin = std::abs(beta.d1(0.0)) <= 1e-12;
  return t;
}

}  // namespace levypde::model
