#include "levypde/verify/jump_sign.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace levypde::verify {

JumpSignReport jump_sign_check(const model::ProblemSpec& spec,
                               const model::SmoothEntropy& beta,
                               std::span<const double> levels, int u_points,
                               double u_span, double tolerance) {
  if (levels.empty())
    throw std::invalid_argument("jump_sign_check: no truncation levels");
  if (u_points < 2)
    throw std::invalid_argument("jump_sign_check: u_points < 2");
  if (!(u_span > 0.0))
    throw std::invalid_argument("jump_sign_check: u_span <= 0");
  if (std::abs(beta.d1(0.0)) > 1e-12)
    throw std::invalid_argument(
        "jump_sign_check: entropy slope at the origin is nonzero");
  for (int i = 0; i <= 200; ++i) {
    const double r = -u_span + 2.0 * u_span * i / 200.0;
    if (beta.d2(r) < -1e-10)
      throw std::invalid_argument(
          "jump_sign_check: entropy convexity probe failed");
  }

  JumpSignReport rep;
  rep.tolerance = tolerance;
  rep.max_integrand = -std::numeric_limits<double>::infinity();
  for (double l : levels) {
    for (int i = 0; i < u_points; ++i) {
      const double u = -u_span + 2.0 * u_span * i / (u_points - 1.0);
      const double tu = model::truncate(u, l);
      for (double z : spec.mark.coarse_nodes) {
        const double integrand =
            beta.value(model::truncate(u + spec.eta(u, z), l)) -
            beta.value(tu + spec.eta(tu, z));
        ++rep.points;
        if (integrand > rep.max_integrand) {
          rep.max_integrand = integrand;
          rep.at_u = u;
          rep.at_z = z;
          rep.at_l = l;
        }
      }
    }
  }
  rep.pass = rep.max_integrand <= tolerance;
  return rep;
}

}  // namespace levypde::verify
