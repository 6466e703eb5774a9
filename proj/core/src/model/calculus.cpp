#include "levypde/model/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "levypde/model/coefficients.hpp"

namespace levypde::model {

double truncate(double u, double l) { return std::clamp(u, -l, l); }

namespace {
void check_band(double l, double delta) {
  if (!(l > 0.0) || !(delta > 0.0))
    throw std::invalid_argument("smoothed truncation needs l > 0, delta > 0");
}
}  // namespace

double h_smooth(double r, double l, double delta) {
  check_band(l, delta);
  double a = std::abs(r), s = r < 0.0 ? -1.0 : 1.0;
  if (a <= l) return r;
  if (a >= l + delta) return s * (l + 0.5 * delta);
  // integral of (l + delta - s)/delta from l to a
  double v = l + ((l + delta) * (a - l) - 0.5 * (a * a - l * l)) / delta;
  return s * v;
}

double h_smooth_d1(double r, double l, double delta) {
  check_band(l, delta);
  double a = std::abs(r);
  if (a <= l) return 1.0;
  if (a >= l + delta) return 0.0;
  return (l + delta - a) / delta;
}

double h_smooth_d2(double r, double l, double delta) {
  check_band(l, delta);
  double a = std::abs(r);
  if (a <= l || a >= l + delta) return 0.0;
  return (r < 0.0 ? 1.0 : -1.0) / delta;
}

// ---------------------------------------------------------------------------
// beta_xi

namespace {
// reference profile on xi = 1: beta'(r) = sin(pi r / 2) capped at +-1
double beta_ref(double r) {
  double a = std::abs(r);
  if (a <= 1.0)
    return (2.0 / std::numbers::pi) * (1.0 - std::cos(0.5 * std::numbers::pi * a));
  return 2.0 / std::numbers::pi + a - 1.0;
}
double beta_ref_d1(double r) {
  if (std::abs(r) <= 1.0) return std::sin(0.5 * std::numbers::pi * r);
  return r > 0.0 ? 1.0 : -1.0;
}
double beta_ref_d2(double r) {
  double a = std::abs(r);
  if (a < 1.0) return 0.5 * std::numbers::pi * std::cos(0.5 * std::numbers::pi * r);
  return 0.0;
}
}  // namespace

double BetaXi::value(double r) const { return xi * beta_ref(r / xi); }
double BetaXi::d1(double r) const { return beta_ref_d1(r / xi); }
double BetaXi::d2(double r) const { return beta_ref_d2(r / xi) / xi; }

SmoothEntropy BetaXi::entropy() const {
  BetaXi b = *this;
  return SmoothEntropy{[b](double r) { return b.value(r); },
                       [b](double r) { return b.d1(r); },
                       [b](double r) { return b.d2(r); }};
}

SmoothEntropy BetaXi::shifted(double c) const {
  BetaXi b = *this;
  return SmoothEntropy{[b, c](double r) { return b.value(r - c); },
                       [b, c](double r) { return b.d1(r - c); },
                       [b, c](double r) { return b.d2(r - c); }};
}

// Profile constants by dense scan of [0, 1]; the scan pins the constants the
// rest of the code quotes, rather than trusting hand algebra.
double BetaXi::m1() {
  static const double v = [] {
    double m = 0.0;
    for (int i = 0; i <= 200000; ++i) {
      double r = i / 200000.0;
      m = std::max(m, r - beta_ref(r));
    }
    return m;
  }();
  return v;
}

double BetaXi::m2() {
  static const double v = [] {
    double m = 0.0;
    for (int i = 0; i <= 200000; ++i) {
      double r = i / 200000.0;
      m = std::max(m, beta_ref_d2(r));
    }
    return m;
  }();
  return v;
}

// ---------------------------------------------------------------------------
// Cumulative tables

CumulativeTable::CumulativeTable(const std::function<double(double)>& g,
                                 double range, int nodes_per_unit) {
  if (!(range > 0.0) || nodes_per_unit < 1)
    throw std::invalid_argument("cumulative table needs range > 0");
  long n_half = std::max<long>(64, std::lround(std::ceil(range * nodes_per_unit)));
  range_ = range;
  h_ = range / n_half;
  center_ = n_half;
  long n = 2 * n_half + 1;
  integrand_.resize(n);
  values_.resize(n);
  for (long j = 0; j < n; ++j) integrand_[j] = g(-range_ + j * h_);
  values_[center_] = 0.0;
  for (long j = center_; j + 1 < n; ++j)
    values_[j + 1] = values_[j] + 0.5 * h_ * (integrand_[j] + integrand_[j + 1]);
  for (long j = center_; j > 0; --j)
    values_[j - 1] = values_[j] - 0.5 * h_ * (integrand_[j - 1] + integrand_[j]);
}

double CumulativeTable::operator()(double r) const {
  if (values_.empty()) return 0.0;
  long n = static_cast<long>(values_.size());
  if (r <= -range_) return values_.front() + integrand_.front() * (r + range_);
  if (r >= range_) return values_.back() + integrand_.back() * (r - range_);
  double s = (r + range_) / h_;
  long j = std::min<long>(n - 2, static_cast<long>(s));
  double w = s - j;
  return values_[j] * (1.0 - w) + values_[j + 1] * w;
}

// ---------------------------------------------------------------------------
// Kirchhoff transform

namespace {
double sqrt_phi_prime(const DiffusionCoeff& phi, double s) {
  double d = phi.deriv(s);
  if (d < -1e-9)
    throw std::invalid_argument("diffusion is decreasing: Phi' < 0");
  return std::sqrt(std::max(0.0, d));
}
}  // namespace

double kirchhoff(const DiffusionCoeff& phi, double x) {
  if (x == 0.0) return 0.0;
  long n = std::max<long>(64, std::lround(std::ceil(std::abs(x) * 1024)));
  double h = x / n;
  double s = 0.5 * (sqrt_phi_prime(phi, 0.0) + sqrt_phi_prime(phi, x));
  for (long j = 1; j < n; ++j) s += sqrt_phi_prime(phi, j * h);
  return s * h;
}

CumulativeTable make_kirchhoff_table(const DiffusionCoeff& phi, double range) {
  return CumulativeTable([&phi](double s) { return sqrt_phi_prime(phi, s); },
                         range);
}

// ---------------------------------------------------------------------------
// Smoothed truncation composed with an entropy

SmoothEntropy make_smoothed_truncation_entropy(const SmoothEntropy& beta,
                                               double l, double delta,
                                               double range) {
  check_band(l, delta);
  auto b1 = beta.d1;
  auto b2 = beta.d2;
  auto table = std::make_shared<CumulativeTable>(
      [b1, l, delta](double r) { return b1(r) * h_smooth_d1(r, l, delta); },
      range);
  return SmoothEntropy{
      [table](double r) { return (*table)(r); },
      [b1, l, delta](double r) { return b1(r) * h_smooth_d1(r, l, delta); },
      [b1, b2, l, delta](double r) {
        return b2(r) * h_smooth_d1(r, l, delta) +
               b1(r) * h_smooth_d2(r, l, delta);
      }};
}

// 8-point Gauss-Legendre on [0, 1] (nodes/weights mapped from the standard
// [-1, 1] rule).
const double kLambdaNode[kLambdaNodes] = {
    0.5 * (1.0 - 0.9602898564975363), 0.5 * (1.0 - 0.7966664774136267),
    0.5 * (1.0 - 0.5255324099163290), 0.5 * (1.0 - 0.1834346424956498),
    0.5 * (1.0 + 0.1834346424956498), 0.5 * (1.0 + 0.5255324099163290),
    0.5 * (1.0 + 0.7966664774136267), 0.5 * (1.0 + 0.9602898564975363)};
const double kLambdaWeight[kLambdaNodes] = {
    0.5 * 0.1012285362903763, 0.5 * 0.2223810344533745,
    0.5 * 0.3137066458778873, 0.5 * 0.3626837833783620,
    0.5 * 0.3626837833783620, 0.5 * 0.3137066458778873,
    0.5 * 0.2223810344533745, 0.5 * 0.1012285362903763};

}  // namespace levypde::model
