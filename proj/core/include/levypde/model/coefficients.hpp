#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

// Coefficient catalog for the scalar balance law
//
//   du + div f(u) dt - lap Phi(u) dt = sigma(u) dW + compensated jumps,
//
// selectable by name so experiment configs stay flat key=value files.
// Every entry is a small value type with closed-form derivatives and
// closed-form Engquist-Osher splittings where the solver needs them.

namespace levypde::model {

// ---------------------------------------------------------------------------
// Flux f : R -> R^d (componentwise profiles; d <= 2).

enum class FluxKind { Zero, Burgers, Advection };

struct FluxCoeff {
  FluxKind kind = FluxKind::Zero;
  double scale = 1.0;                  // burgers: f_k(u) = scale * u^2 / 2
  std::array<double, 2> speed{1.0, 1.0};  // advection: f_k(u) = speed[k] * u

  double value(double u, int axis) const;
  double deriv(double u, int axis) const;
  // Engquist-Osher splitting: eo_plus(u) = int_0^u max(f_k', 0),
  // eo_minus(u) = int_0^u min(f_k', 0); F(a,b) = eo_plus(a) + eo_minus(b).
  double eo_plus(double u, int axis) const;
  double eo_minus(double u, int axis) const;
  // l1-sum Lipschitz constant over [-r, r]: sum_k sup |f_k'|.  Using the
  // summed constant keeps the explicit update monotone in any dimension
  // under the hyperbolic CFL fraction.
  double lipschitz_sum(double r, int dim) const;
};

FluxCoeff make_flux(const std::string& name, double scale = 1.0,
                    std::array<double, 2> speed = {1.0, 0.0});

// ---------------------------------------------------------------------------
// Degenerate diffusion Phi : nondecreasing, Phi(0) = 0.

enum class DiffusionKind { Zero, Linear, PorousMedium };

struct DiffusionCoeff {
  DiffusionKind kind = DiffusionKind::Zero;
  double scale = 1.0;  // linear: scale*u ; porous-medium: scale * u|u|^(p-1)
  double p = 2.0;      // porous-medium exponent, p >= 1

  double value(double u) const;
  double deriv(double u) const;           // >= 0 for catalog entries
  double lipschitz(double r) const;       // sup over [-r, r] of Phi'
};

DiffusionCoeff make_diffusion(const std::string& name, double scale = 1.0,
                              double p = 2.0);

// ---------------------------------------------------------------------------
// Brownian amplitude sigma : sigma(0) = 0, Lipschitz.

enum class SigmaKind { Zero, Clamp, Linear };

struct SigmaCoeff {
  SigmaKind kind = SigmaKind::Zero;
  double amp = 0.0;    // clamp: amp * clamp(u/u_scale, -1, 1); linear: amp*u
  double u_scale = 1.0;

  double value(double u) const;
  double lipschitz() const;   // exact for catalog entries
};

SigmaCoeff make_sigma(const std::string& name, double amp = 0.0,
                      double u_scale = 1.0);

// ---------------------------------------------------------------------------
// Jump amplitude eta(u; z) = profile(u) * h(z).  The separable form is a
// catalog-wide convention: it makes the compensator a closed-form multiple
// of profile(u) once int_E h dm is known, which keeps the solver's per-cell
// work independent of the mark quadrature.

enum class JumpKind { Zero, Linear, BoundedRamp, DecreasingRamp };

struct JumpCoeff {
  JumpKind kind = JumpKind::Zero;
  double amp = 0.0;     // linear: amp*u ; ramps: amp * clamp(u/u_scale, -1, 1)
  double u_scale = 1.0;

  double profile(double u) const;
  double lipschitz() const;   // Lipschitz constant of the profile
  bool nondecreasing() const { return kind != JumpKind::DecreasingRamp; }
};

JumpCoeff make_jump(const std::string& name, double amp = 0.0,
                    double u_scale = 1.0);

// Mark profile h : E -> [0, 1] multiplying the jump amplitude.
enum class JumpProfileKind { One, AbsCapped };

struct JumpProfile {
  JumpProfileKind kind = JumpProfileKind::One;
  double value(double z) const;
};

JumpProfile make_jump_profile(const std::string& name);

// ---------------------------------------------------------------------------
// Finite-activity mark measure m(dz) on the interval [z_lo, z_hi] with total
// mass `rate` (the Poisson intensity).  Carries two trapezoid tables: a fine
// one for one-dimensional integrals (compensator mass, validation probes) and
// a coarse one for the triple integrals inside band functionals, where the
// mark loop multiplies a Gauss-Legendre loop per cell per step.

enum class MarkDensityKind { Uniform, LinearRamp };

struct MarkMeasure {
  double rate = 0.0;  // m(E); zero disables jumps
  double z_lo = 0.0;
  double z_hi = 1.0;
  MarkDensityKind density = MarkDensityKind::Uniform;

  std::vector<double> nodes, weights;              // fine table, 256 panels
  std::vector<double> coarse_nodes, coarse_weights;  // 32 panels

  // Probability density of a single mark, rho(z)/rate integrates to 1.
  double density_value(double z) const;
  // Inverse CDF of the normalized mark distribution.
  double sample(double uniform01) const;
};

MarkMeasure make_mark_measure(double rate, double z_lo, double z_hi,
                              const std::string& density_name = "uniform");

// ---------------------------------------------------------------------------
// Initial data u0: grid-evaluable with finite L1 mass and a known sup bound.

enum class InitialDataKind { Zero, Gaussian, Box, Riemann, Tail };

struct InitialData {
  InitialDataKind kind = InitialDataKind::Zero;
  double amp = 1.0;
  double width = 1.0;
  double center = 0.0;

  double value(double x) const;
  double value(double x, double y) const;
  double sup_bound() const;  // analytic bound on |u0|
};

InitialData make_initial_data(const std::string& name, double amp = 1.0,
                              double width = 1.0, double center = 0.0);

}  // namespace levypde::model
