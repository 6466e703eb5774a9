#include "levypde/model/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levypde::model {

namespace {
[[noreturn]] void unknown(const std::string& what, const std::string& name) {
  throw std::invalid_argument("unknown " + what + " name: '" + name + "'");
}
}  // namespace

// ---------------------------------------------------------------------------
// Flux

double FluxCoeff::value(double u, int axis) const {
  switch (kind) {
    case FluxKind::Zero: return 0.0;
    case FluxKind::Burgers: return 0.5 * scale * u * u;
    case FluxKind::Advection: return speed[axis] * u;
  }
  return 0.0;
}

double FluxCoeff::deriv(double u, int axis) const {
  switch (kind) {
    case FluxKind::Zero: return 0.0;
    case FluxKind::Burgers: return scale * u;
    case FluxKind::Advection: return speed[axis];
  }
  return 0.0;
}

double FluxCoeff::eo_plus(double u, int axis) const {
  switch (kind) {
    case FluxKind::Zero: return 0.0;
    case FluxKind::Burgers: return u > 0.0 ? 0.5 * scale * u * u : 0.0;
    case FluxKind::Advection: return std::max(speed[axis], 0.0) * u;
  }
  return 0.0;
}

double FluxCoeff::eo_minus(double u, int axis) const {
  switch (kind) {
    case FluxKind::Zero: return 0.0;
    // int_0^u min(scale*s, 0) ds: positive value for u < 0, slope <= 0.
    case FluxKind::Burgers: return u < 0.0 ? 0.5 * scale * u * u : 0.0;
    case FluxKind::Advection: return std::min(speed[axis], 0.0) * u;
  }
  return 0.0;
}

double FluxCoeff::lipschitz_sum(double r, int dim) const {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    switch (kind) {
      case FluxKind::Zero: break;
      case FluxKind::Burgers: s += scale * std::abs(r); break;
      case FluxKind::Advection: s += std::abs(speed[k]); break;
    }
  }
  return s;
}

FluxCoeff make_flux(const std::string& name, double scale,
                    std::array<double, 2> speed) {
  FluxCoeff f;
  f.scale = scale;
  f.speed = speed;
  if (name == "zero") {
    f.kind = FluxKind::Zero;
  } else if (name == "burgers") {
    if (scale <= 0.0) throw std::invalid_argument("burgers flux needs scale > 0");
    f.kind = FluxKind::Burgers;
  } else if (name == "advection" || name == "linear-advection") {
    f.kind = FluxKind::Advection;
  } else {
    unknown("flux", name);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Diffusion

double DiffusionCoeff::value(double u) const {
  switch (kind) {
    case DiffusionKind::Zero: return 0.0;
    case DiffusionKind::Linear: return scale * u;
    case DiffusionKind::PorousMedium:
      if (p == 2.0) return scale * u * std::abs(u);
      return scale * u * std::pow(std::abs(u), p - 1.0);
  }
  return 0.0;
}

double DiffusionCoeff::deriv(double u) const {
  switch (kind) {
    case DiffusionKind::Zero: return 0.0;
    case DiffusionKind::Linear: return scale;
    case DiffusionKind::PorousMedium:
      if (p == 2.0) return 2.0 * scale * std::abs(u);
      return scale * p * std::pow(std::abs(u), p - 1.0);
  }
  return 0.0;
}

double DiffusionCoeff::lipschitz(double r) const {
  switch (kind) {
    case DiffusionKind::Zero: return 0.0;
    case DiffusionKind::Linear: return std::abs(scale);
    case DiffusionKind::PorousMedium:
      return scale * p * std::pow(std::abs(r), p - 1.0);
  }
  return 0.0;
}

DiffusionCoeff make_diffusion(const std::string& name, double scale, double p) {
  DiffusionCoeff d;
  d.scale = scale;
  d.p = p;
  if (name == "zero") {
    d.kind = DiffusionKind::Zero;
  } else if (name == "linear") {
    if (scale < 0.0) throw std::invalid_argument("linear diffusion needs scale >= 0");
    d.kind = DiffusionKind::Linear;
  } else if (name == "porous-medium") {
    if (scale < 0.0 || p < 1.0)
      throw std::invalid_argument("porous-medium needs scale >= 0, p >= 1");
    d.kind = DiffusionKind::PorousMedium;
  } else {
    unknown("diffusion", name);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Brownian amplitude

double SigmaCoeff::value(double u) const {
  switch (kind) {
    case SigmaKind::Zero: return 0.0;
    case SigmaKind::Clamp: return amp * std::clamp(u / u_scale, -1.0, 1.0);
    case SigmaKind::Linear: return amp * u;
  }
  return 0.0;
}

double SigmaCoeff::lipschitz() const {
  switch (kind) {
    case SigmaKind::Zero: return 0.0;
    case SigmaKind::Clamp: return std::abs(amp) / u_scale;
    case SigmaKind::Linear: return std::abs(amp);
  }
  return 0.0;
}

SigmaCoeff make_sigma(const std::string& name, double amp, double u_scale) {
  SigmaCoeff s;
  s.amp = amp;
  s.u_scale = u_scale;
  if (name == "zero") {
    s.kind = SigmaKind::Zero;
    s.amp = 0.0;
  } else if (name == "clamp") {
    if (u_scale <= 0.0) throw std::invalid_argument("clamp sigma needs u_scale > 0");
    s.kind = SigmaKind::Clamp;
  } else if (name == "linear") {
    s.kind = SigmaKind::Linear;
  } else {
    unknown("sigma", name);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Jump amplitude profile in u

double JumpCoeff::profile(double u) const {
  switch (kind) {
    case JumpKind::Zero: return 0.0;
    case JumpKind::Linear: return amp * u;
    case JumpKind::BoundedRamp:
      return amp * std::clamp(u / u_scale, -1.0, 1.0);
    case JumpKind::DecreasingRamp:
      return -amp * std::clamp(u / u_scale, -1.0, 1.0);
  }
  return 0.0;
}

double JumpCoeff::lipschitz() const {
  switch (kind) {
    case JumpKind::Zero: return 0.0;
    case JumpKind::Linear: return std::abs(amp);
    case JumpKind::BoundedRamp:
    case JumpKind::DecreasingRamp: return std::abs(amp) / u_scale;
  }
  return 0.0;
}

JumpCoeff make_jump(const std::string& name, double amp, double u_scale) {
  JumpCoeff j;
  j.amp = amp;
  j.u_scale = u_scale;
  if (name == "zero") {
    j.kind = JumpKind::Zero;
    j.amp = 0.0;
  } else if (name == "linear") {
    j.kind = JumpKind::Linear;
  } else if (name == "bounded-ramp") {
    if (u_scale <= 0.0) throw std::invalid_argument("ramp jump needs u_scale > 0");
    j.kind = JumpKind::BoundedRamp;
  } else if (name == "decreasing-ramp") {
    if (u_scale <= 0.0) throw std::invalid_argument("ramp jump needs u_scale > 0");
    j.kind = JumpKind::DecreasingRamp;
  } else {
    unknown("jump", name);
  }
  return j;
}

double JumpProfile::value(double z) const {
  switch (kind) {
    case JumpProfileKind::One: return 1.0;
    case JumpProfileKind::AbsCapped: return std::min(1.0, std::abs(z));
  }
  return 1.0;
}

JumpProfile make_jump_profile(const std::string& name) {
  JumpProfile h;
  if (name == "one") {
    h.kind = JumpProfileKind::One;
  } else if (name == "abs-capped") {
    h.kind = JumpProfileKind::AbsCapped;
  } else {
    unknown("jump profile", name);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Mark measure

double MarkMeasure::density_value(double z) const {
  double len = z_hi - z_lo;
  switch (density) {
    case MarkDensityKind::Uniform: return rate / len;
    case MarkDensityKind::LinearRamp:
      return rate * 2.0 * (z - z_lo) / (len * len);
  }
  return 0.0;
}

double MarkMeasure::sample(double u) const {
  double len = z_hi - z_lo;
  switch (density) {
    case MarkDensityKind::Uniform: return z_lo + u * len;
    case MarkDensityKind::LinearRamp: return z_lo + len * std::sqrt(u);
  }
  return z_lo;
}

namespace {
void fill_table(const MarkMeasure& m, int panels, std::vector<double>& nodes,
                std::vector<double>& weights) {
  nodes.resize(panels + 1);
  weights.resize(panels + 1);
  double dz = (m.z_hi - m.z_lo) / panels;
  for (int q = 0; q <= panels; ++q) {
    nodes[q] = m.z_lo + q * dz;
    double w = (q == 0 || q == panels) ? 0.5 : 1.0;
    weights[q] = w * dz * m.density_value(nodes[q]);
  }
}
}  // namespace

MarkMeasure make_mark_measure(double rate, double z_lo, double z_hi,
                              const std::string& density_name) {
  if (rate < 0.0) throw std::invalid_argument("mark measure needs rate >= 0");
  if (!(z_hi > z_lo)) throw std::invalid_argument("mark interval is empty");
  MarkMeasure m;
  m.rate = rate;
  m.z_lo = z_lo;
  m.z_hi = z_hi;
  if (density_name == "uniform") {
    m.density = MarkDensityKind::Uniform;
  } else if (density_name == "linear") {
    m.density = MarkDensityKind::LinearRamp;
  } else {
    unknown("mark density", density_name);
  }
  fill_table(m, 256, m.nodes, m.weights);
  fill_table(m, 32, m.coarse_nodes, m.coarse_weights);
  return m;
}

// ---------------------------------------------------------------------------
// Initial data

double InitialData::value(double x) const {
  double s = x - center;
  switch (kind) {
    case InitialDataKind::Zero: return 0.0;
    case InitialDataKind::Gaussian: return amp * std::exp(-(s * s) / (width * width));
    case InitialDataKind::Box: return std::abs(s) <= width ? amp : 0.0;
    case InitialDataKind::Riemann: return x < center ? amp : 0.0;
    case InitialDataKind::Tail: {
      double r = 1.0 + std::abs(s) / width;
      return amp / (r * r);
    }
  }
  return 0.0;
}

double InitialData::value(double x, double y) const {
  double s = x - center;
  switch (kind) {
    case InitialDataKind::Zero: return 0.0;
    case InitialDataKind::Gaussian:
      return amp * std::exp(-(s * s + y * y) / (width * width));
    case InitialDataKind::Box:
      return (std::abs(s) <= width && std::abs(y) <= width) ? amp : 0.0;
    case InitialDataKind::Riemann: return x < center ? amp : 0.0;
    case InitialDataKind::Tail: {
      double r = 1.0 + std::hypot(s, y) / width;
      return amp / (r * r);
    }
  }
  return 0.0;
}

double InitialData::sup_bound() const {
  return kind == InitialDataKind::Zero ? 0.0 : std::abs(amp);
}

InitialData make_initial_data(const std::string& name, double amp,
                              double width, double center) {
  InitialData u;
  u.amp = amp;
  u.width = width;
  u.center = center;
  if (width <= 0.0) throw std::invalid_argument("initial data needs width > 0");
  if (name == "zero") {
    u.kind = InitialDataKind::Zero;
  } else if (name == "gaussian") {
    u.kind = InitialDataKind::Gaussian;
  } else if (name == "box") {
    u.kind = InitialDataKind::Box;
  } else if (name == "riemann") {
    u.kind = InitialDataKind::Riemann;
  } else if (name == "tail") {
    u.kind = InitialDataKind::Tail;
  } else {
    unknown("initial data", name);
  }
  return u;
}

}  // namespace levypde::model
