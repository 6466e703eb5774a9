#pragma once

#include <string>

#include "levypde/model/calculus.hpp"
#include "levypde/model/coefficients.hpp"

namespace levypde::model {

// Full description of one problem instance.  Coefficients come from the
// catalog; the derived constants (Lipschitz bounds over the declared state
// range, compensator mass, Kirchhoff table) are computed once by
// make_problem_spec so the solver and the functionals never re-derive them.
struct ProblemSpec {
  FluxCoeff flux;
  DiffusionCoeff phi;
  SigmaCoeff sigma;
  JumpCoeff jump;
  JumpProfile jump_profile;
  MarkMeasure mark;
  InitialData u0;
  int dim = 1;

  // Range [-range_bound, range_bound] the derived tables and the assumption
  // probes cover (generous: level ladders go to 4 sup|u0|).
  double range_bound = 2.0;
  // Range the running state is expected to stay in; the CFL constants are
  // evaluated here.  The walk monitors the state and fails loudly if it
  // leaves 1.5x this range instead of silently losing monotonicity.
  double state_bound = 1.0;

  // Lipschitz constants over the state range (flux is the l1 sum over
  // components) and the declared noise bounds used by assumption A7.
  double lip_flux_sum = 0.0;
  double lip_phi = 0.0;
  double lip_sigma = 0.0;
  double lip_jump = 0.0;
  double sigma_bound = 0.0;
  double jump_bound = 0.0;

  double h_mass = 0.0;  // int_E h(z) m(dz), by the fine mark table

  CumulativeTable kirchhoff_table;

  double eta(double u, double z) const {
    return jump.profile(u) * jump_profile.value(z);
  }
  double eta_profile(double u) const { return jump.profile(u); }
  bool has_jumps() const { return mark.rate > 0.0 && jump.kind != JumpKind::Zero; }

  double kirchhoff_fast(double x) const { return kirchhoff_table(x); }
};

struct ProblemSpecOptions {
  double range_bound = 0.0;   // 0 => derived from u0 sup bound
  double state_bound = 0.0;   // 0 => sup|u0| plus noise headroom
  double sigma_bound = -1.0;  // <0 => catalog default
  double jump_bound = -1.0;   // <0 => catalog default
};

ProblemSpec make_problem_spec(FluxCoeff flux, DiffusionCoeff phi,
                              SigmaCoeff sigma, JumpCoeff jump,
                              JumpProfile jump_profile, MarkMeasure mark,
                              InitialData u0, int dim,
                              const ProblemSpecOptions& opt = {});

}  // namespace levypde::model
