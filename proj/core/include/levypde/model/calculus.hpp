#pragma once

#include <functional>
#include <vector>

// Scalar calculus used throughout: the truncation family, its smoothed
// variant, the bounded convex entropy family beta_xi, cumulative-integral
// tables, and the Kirchhoff transform of the diffusion.

namespace levypde::model {

struct DiffusionCoeff;

// Hard truncation T_l: clamps to [-l, l].
double truncate(double u, double l);

// Smoothed truncation h_{l,delta}: h(0) = 0 and
//   h'(r) = 1                      for |r| <= l,
//   h'(r) = (l + delta - |r|)/delta for l < |r| < l + delta,
//   h'(r) = 0                      for |r| >= l + delta,
// so h -> T_l pointwise as delta -> 0.  h'' is -sign(r)/delta on the band.
double h_smooth(double r, double l, double delta);
double h_smooth_d1(double r, double l, double delta);
double h_smooth_d2(double r, double l, double delta);

// A C^2-ish scalar entropy handed around by value: beta plus two derivatives.
struct SmoothEntropy {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

// Bounded convex approximation of |r|: beta_xi(r) = xi * beta(r / xi) with
// the reference profile beta'(r) = sin(pi r / 2) on [-1, 1] and +-1 outside.
// Satisfies beta(0) = 0, beta even, beta'' >= 0, |beta'| <= 1, and
//   |r| - m1()*xi <= beta_xi(r) <= |r|,   |beta_xi''| <= m2()/xi on |r|<=xi.
struct BetaXi {
  double xi = 1.0;

  double value(double r) const;
  double d1(double r) const;
  double d2(double r) const;

  SmoothEntropy entropy() const;            // as a SmoothEntropy
  SmoothEntropy shifted(double c) const;    // r -> beta_xi(r - c)

  // Profile constants sup |r| - beta(r) and sup |beta''| on [-1, 1],
  // computed numerically once at startup (dense scan) and cached.
  static double m1();
  static double m2();
};

// Cumulative trapezoid table for r -> int_0^r g(s) ds on [-range, range]
// with a fixed node density.  Evaluation is linear interpolation between
// nodes; outside the range it extrapolates with the boundary slope.
class CumulativeTable {
 public:
  CumulativeTable() = default;
  CumulativeTable(const std::function<double(double)>& integrand, double range,
                  int nodes_per_unit = 1024);

  double operator()(double r) const;
  double range() const { return range_; }
  bool empty() const { return values_.empty(); }

 private:
  double range_ = 0.0;
  double h_ = 1.0;
  long center_ = 0;
  std::vector<double> values_;     // cumulative integral at nodes
  std::vector<double> integrand_;  // g at nodes (boundary slopes)
};

// Kirchhoff transform G(x) = int_0^x sqrt(Phi'(s)) ds, evaluated by direct
// composite trapezoid quadrature (1024 nodes per unit, at least 64).
double kirchhoff(const DiffusionCoeff& phi, double x);

// Table-backed Kirchhoff transform for per-cell hot loops.
CumulativeTable make_kirchhoff_table(const DiffusionCoeff& phi, double range);

// Smoothed truncation composed with an entropy: S(0) = 0 and
// S'(r) = beta'(r) h'_{l,delta}(r), so S -> beta o T_l as delta -> 0.
// The value is table-backed over [-range, range]; derivatives are closed
// form.
SmoothEntropy make_smoothed_truncation_entropy(const SmoothEntropy& beta,
                                               double l, double delta,
                                               double range);

// Fixed 8-point Gauss-Legendre rule on [0, 1] used by every lambda-integral
// in the jump terms (correction integrals and boundary-layer term).
inline constexpr int kLambdaNodes = 8;
extern const double kLambdaNode[kLambdaNodes];
extern const double kLambdaWeight[kLambdaNodes];

}  // namespace levypde::model
