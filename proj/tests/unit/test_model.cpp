#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "levypde/model/calculus.hpp"
#include "levypde/model/coefficients.hpp"
#include "levypde/model/entropy_triple.hpp"
#include "levypde/model/problem_spec.hpp"
#include "levypde/model/validation.hpp"

using namespace levypde;
using namespace levypde::model;

namespace {

// Independent quadrature oracle: dense composite trapezoid, no shared code
// with the library tables.
double oracle_trapezoid(const std::function<double(double)>& f, double a,
                        double b, int n = 1 << 20) {
  double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

SmoothEntropy square_entropy() {
  return SmoothEntropy{[](double r) { return r * r; },
                       [](double r) { return 2.0 * r; },
                       [](double) { return 2.0; }};
}

ProblemSpec burgers_pm_spec() {
  return make_problem_spec(make_flux("burgers"), make_diffusion("linear", 1.0),
                           make_sigma("zero"), make_jump("zero"),
                           make_jump_profile("one"),
                           make_mark_measure(0.0, 0.0, 1.0),
                           make_initial_data("gaussian", 1.0, 0.5), 1);
}

}  // namespace

TEST_CASE("truncation clamps to the level and is 1-Lipschitz") {
  CHECK(truncate(3.0, 2.0) == 2.0);
  CHECK(truncate(-3.0, 2.0) == -2.0);
  CHECK(truncate(1.5, 2.0) == 1.5);
  CHECK(truncate(0.0, 2.0) == 0.0);
  // |T_l(a) - T_l(b)| <= |a - b| on a deterministic probe grid
  for (int i = -40; i <= 40; ++i) {
    for (int j = -40; j <= 40; ++j) {
      double a = 0.13 * i, b = 0.17 * j;
      CHECK(std::abs(truncate(a, 1.7) - truncate(b, 1.7)) <=
            std::abs(a - b) + 1e-15);
    }
  }
}

TEST_CASE("smoothed truncation profile h_{l,delta}") {
  const double l = 1.0, d = 0.5;
  CHECK(h_smooth(0.0, l, d) == 0.0);
  CHECK(h_smooth_d1(0.5, l, d) == 1.0);
  CHECK(h_smooth_d1(1.25, l, d) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(h_smooth_d1(2.0, l, d) == 0.0);
  CHECK(h_smooth_d2(1.25, l, d) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(h_smooth_d2(-1.25, l, d) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(h_smooth_d2(0.5, l, d) == 0.0);

  // sup |h_{l,delta} - T_l| = delta/2, attained beyond the band; halving
  // delta halves the gap.
  for (double delta : {0.4, 0.2, 0.1}) {
    double sup = 0.0;
    for (int i = -300; i <= 300; ++i) {
      double r = 0.01 * i;
      sup = std::max(sup, std::abs(h_smooth(r, l, delta) - truncate(r, l)));
    }
    CHECK(sup == doctest::Approx(delta / 2).epsilon(1e-3));
  }
  // odd symmetry
  for (double r : {0.3, 1.1, 1.4, 2.2})
    CHECK(h_smooth(-r, l, d) == doctest::Approx(-h_smooth(r, l, d)));
}

TEST_CASE("bounded convex entropy family beta_xi") {
  const double m1_exact = 1.0 - 2.0 / std::numbers::pi;
  const double m2_exact = std::numbers::pi / 2.0;
  CHECK(BetaXi::m1() == doctest::Approx(m1_exact).epsilon(1e-6));
  CHECK(BetaXi::m2() == doctest::Approx(m2_exact).epsilon(1e-6));

  // frozen point value: beta_{0.5}(0.5) = 0.5 * beta(1) = (2/pi)*0.5 = 1/pi
  BetaXi bh{0.5};
  CHECK(bh.value(0.5) ==
        doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-12));

  for (double xi : {1.0, 0.25, 0.05}) {
    BetaXi b{xi};
    CHECK(b.value(0.0) == 0.0);
    CHECK(b.d1(0.0) == 0.0);
    for (int i = -200; i <= 200; ++i) {
      double r = 0.02 * i;
      CHECK(b.value(r) <= std::abs(r) + 1e-14);
      CHECK(b.value(r) >= std::abs(r) - BetaXi::m1() * xi - 1e-14);
      CHECK(b.value(-r) == doctest::Approx(b.value(r)).epsilon(1e-13));
      CHECK(b.d1(-r) == doctest::Approx(-b.d1(r)).epsilon(1e-13));
      CHECK(std::abs(b.d1(r)) <= 1.0 + 1e-14);
      CHECK(b.d2(r) >= -1e-14);
      CHECK(b.d2(r) <= BetaXi::m2() / xi + 1e-9);
      if (std::abs(r) > xi + 1e-12) CHECK(b.d2(r) == 0.0);
    }
    // derivative consistency by central differences
    for (double r : {-1.3, -0.4, 0.2, 0.9}) {
      double h = 1e-5;
      double fd = (b.value(r + h) - b.value(r - h)) / (2 * h);
      CHECK(fd == doctest::Approx(b.d1(r)).epsilon(1e-6));
    }
  }
}

TEST_CASE("kirchhoff transform: cubic diffusion gives G(2) = 2") {
  // Phi(r) = r^3/3 is porous-medium with scale 1/3, p = 3; then
  // sqrt(Phi') = |r| and G(2) = int_0^2 |r| dr = 2.
  auto phi = make_diffusion("porous-medium", 1.0 / 3.0, 3.0);
  double oracle = oracle_trapezoid(
      [&](double s) { return std::sqrt(phi.deriv(s)); }, 0.0, 2.0);
  CHECK(oracle == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(kirchhoff(phi, 2.0) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(kirchhoff(phi, 0.0) == 0.0);
  CHECK(kirchhoff(phi, -2.0) == doctest::Approx(-2.0).epsilon(1e-8));

  // linear diffusion: G(x) = sqrt(c) x exactly (trapezoid of a constant)
  auto lin = make_diffusion("linear", 0.25);
  CHECK(kirchhoff(lin, 1.7) == doctest::Approx(0.5 * 1.7).epsilon(1e-14));

  // monotone in x
  double prev = kirchhoff(phi, -3.0);
  for (int i = -29; i <= 30; ++i) {
    double g = kirchhoff(phi, 0.1 * i);
    CHECK(g >= prev - 1e-14);
    prev = g;
  }

  // table-backed evaluation tracks the direct quadrature
  auto table = make_kirchhoff_table(phi, 4.0);
  for (double x : {-3.7, -1.2, 0.0, 0.6, 2.0, 3.9})
    CHECK(table(x) == doctest::Approx(kirchhoff(phi, x)).epsilon(1e-5));
}

TEST_CASE("entropy triple companions by cumulative quadrature") {
  auto spec = burgers_pm_spec();
  auto triple = make_entropy_triple(spec, square_entropy(), 2.0);

  // zeta(1) = int_0^1 2s * s ds = 2/3 for beta = r^2, burgers flux
  double zeta_oracle =
      oracle_trapezoid([](double s) { return 2.0 * s * s; }, 0.0, 1.0);
  CHECK(zeta_oracle == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(triple.zeta_at(1.0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-5));

  // nu(2) = int_0^2 2s * 1 ds = 4 for Phi = r (trapezoid exact on linear)
  CHECK(triple.nu_at(2.0) == doctest::Approx(4.0).epsilon(1e-12));

  CHECK(triple.slope_bound == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(triple.convex);
  CHECK(triple.zero_slope_at_origin);

  // centered-difference consistency: zeta' ~ beta' f' away from table nodes
  for (double r : {-1.5, -0.7, 0.3, 1.1}) {
    double h = 1e-2;
    double fd = (triple.zeta_at(r + h, 0) - triple.zeta_at(r - h, 0)) / (2 * h);
    CHECK(fd == doctest::Approx(2.0 * r * r).epsilon(2e-3).scale(1.0));
  }

  // shifted entropy loses the zero-slope flag
  BetaXi b{0.25};
  auto shifted = make_entropy_triple(spec, b.shifted(1.0), 2.0);
  CHECK_FALSE(shifted.zero_slope_at_origin);
  CHECK(shifted.convex);
}

TEST_CASE("smoothed truncation entropy S' = beta' h'") {
  auto beta = square_entropy();
  auto S = make_smoothed_truncation_entropy(beta, 1.0, 0.5, 4.0);
  CHECK(S.value(0.0) == 0.0);
  CHECK(S.d1(0.5) == doctest::Approx(1.0));          // 2r * 1 at r=.5
  CHECK(S.d1(1.25) == doctest::Approx(2.5 * 0.5));   // 2r * h'
  CHECK(S.d1(3.0) == 0.0);
  // S(2) = int_0^1 2r dr + int_1^1.5 2r (1.5-r)/.5 dr = 1 + 7/12
  CHECK(S.value(2.0) == doctest::Approx(1.0 + 7.0 / 12.0).epsilon(1e-5));

  // delta -> 0 recovers beta composed with the hard truncation
  for (double delta : {0.2, 0.1, 0.05}) {
    auto Sd = make_smoothed_truncation_entropy(beta, 1.0, delta, 4.0);
    double sup = 0.0;
    for (int i = -350; i <= 350; ++i) {
      double r = 0.01 * i;
      double target = beta.value(truncate(r, 1.0));
      sup = std::max(sup, std::abs(Sd.value(r) - target));
    }
    // |S - beta o T_l| <= sup_{band} |beta'| * delta/2 (+ table slack)
    CHECK(sup <= 2.0 * (1.0 + delta) * delta / 2 + 1e-4);
  }
}

TEST_CASE("engquist-osher splitting of the catalog fluxes") {
  auto burgers = make_flux("burgers");
  // consistency F(a, a) = f(a)
  for (double a : {-2.0, -0.5, 0.0, 0.7, 1.9})
    CHECK(burgers.eo_plus(a, 0) + burgers.eo_minus(a, 0) ==
          doctest::Approx(burgers.value(a, 0)).epsilon(1e-14));
  // classic sonic-point value: F(1, -1) = 1/2 + 1/2 = 1 for f = u^2/2
  CHECK(burgers.eo_plus(1.0, 0) + burgers.eo_minus(-1.0, 0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  // monotone: nondecreasing in the left slot, nonincreasing in the right
  for (double a : {-1.0, 0.0, 1.0}) {
    CHECK(burgers.eo_plus(a + 0.1, 0) >= burgers.eo_plus(a, 0) - 1e-14);
    CHECK(burgers.eo_minus(a + 0.1, 0) <= burgers.eo_minus(a, 0) + 1e-14);
  }

  auto adv = make_flux("advection", 1.0, {-2.0, 0.0});
  CHECK(adv.eo_plus(0.7, 0) == 0.0);
  CHECK(adv.eo_minus(0.7, 0) == doctest::Approx(-1.4));
  CHECK(adv.lipschitz_sum(3.0, 1) == doctest::Approx(2.0));

  CHECK(burgers.lipschitz_sum(2.0, 1) == doctest::Approx(2.0));
  CHECK(burgers.lipschitz_sum(2.0, 2) == doctest::Approx(4.0));
}

TEST_CASE("mark measure tables and inverse-CDF sampling") {
  auto uni = make_mark_measure(2.0, 0.0, 1.0, "uniform");
  double mass = 0.0;
  for (std::size_t q = 0; q < uni.nodes.size(); ++q) mass += uni.weights[q];
  CHECK(mass == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(uni.sample(0.25) == doctest::Approx(0.25).epsilon(1e-14));

  auto lin = make_mark_measure(3.0, 0.0, 2.0, "linear");
  mass = 0.0;
  for (std::size_t q = 0; q < lin.nodes.size(); ++q) mass += lin.weights[q];
  CHECK(mass == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(lin.sample(0.25) == doctest::Approx(1.0).epsilon(1e-14));  // 2 sqrt(u)

  double coarse = 0.0;
  for (std::size_t q = 0; q < uni.coarse_nodes.size(); ++q)
    coarse += uni.coarse_weights[q];
  CHECK(coarse == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS(make_mark_measure(-1.0, 0.0, 1.0));
  CHECK_THROWS(make_mark_measure(1.0, 1.0, 1.0));
}

TEST_CASE("initial data catalog") {
  auto tail = make_initial_data("tail", 16.0, 1.0);
  CHECK(tail.value(1.0) == doctest::Approx(4.0));
  CHECK(tail.value(0.0) == doctest::Approx(16.0));
  CHECK(tail.sup_bound() == doctest::Approx(16.0));

  auto box = make_initial_data("box", 2.0, 1.0);
  CHECK(box.value(0.5) == 2.0);
  CHECK(box.value(1.5) == 0.0);

  auto riem = make_initial_data("riemann", 1.0);
  CHECK(riem.value(-0.3) == 1.0);
  CHECK(riem.value(0.3) == 0.0);

  auto g = make_initial_data("gaussian", 1.5, 0.5);
  CHECK(g.value(0.0) == doctest::Approx(1.5));
  CHECK(g.value(0.5) == doctest::Approx(1.5 * std::exp(-1.0)));
  CHECK(g.value(0.3, 0.4) == doctest::Approx(1.5 * std::exp(-1.0)));
}

TEST_CASE("assumption audit on catalog specs") {
  // A fully compliant spec: every assumption passes.
  auto good = make_problem_spec(
      make_flux("burgers"), make_diffusion("porous-medium", 0.1, 2.0),
      make_sigma("clamp", 0.2, 0.5), make_jump("bounded-ramp", 0.2, 0.5),
      make_jump_profile("abs-capped"), make_mark_measure(2.0, 0.0, 1.0),
      make_initial_data("gaussian", 1.0, 0.5), 1);
  auto rep = validate_assumptions(good, 256, 11);
  CHECK(rep.all_pass);
  CHECK(rep.checks.size() == 7);

  // sigma(u) = u declared with bound 1 on range [-2, 2]: A7 must fail.
  ProblemSpecOptions opt;
  opt.range_bound = 2.0;
  opt.sigma_bound = 1.0;
  auto unbounded = make_problem_spec(
      make_flux("burgers"), make_diffusion("zero"), make_sigma("linear", 1.0),
      make_jump("zero"), make_jump_profile("one"),
      make_mark_measure(0.0, 0.0, 1.0),
      make_initial_data("gaussian", 1.0, 0.5), 1, opt);
  auto rep2 = validate_assumptions(unbounded, 256, 11);
  CHECK_FALSE(rep2.all_pass);
  REQUIRE(rep2.find("A7") != nullptr);
  CHECK_FALSE(rep2.find("A7")->pass);
  CHECK(rep2.find("A4")->pass);

  // decreasing jump profile: A6 must fail.
  auto decreasing = make_problem_spec(
      make_flux("zero"), make_diffusion("zero"), make_sigma("zero"),
      make_jump("decreasing-ramp", 0.2, 0.5), make_jump_profile("one"),
      make_mark_measure(1.0, 0.0, 1.0),
      make_initial_data("gaussian", 1.0, 0.5), 1);
  auto rep3 = validate_assumptions(decreasing, 256, 11);
  REQUIRE(rep3.find("A6") != nullptr);
  CHECK_FALSE(rep3.find("A6")->pass);

  // determinism of the audit and the probe-count guard
  auto again = validate_assumptions(good, 256, 11);
  CHECK(again.to_json() == rep.to_json());
  CHECK_THROWS(validate_assumptions(good, 50, 11));

  // nonsense spec: negative jump rate is rejected at construction
  CHECK_THROWS(make_problem_spec(
      make_flux("zero"), make_diffusion("zero"), make_sigma("zero"),
      make_jump("zero"), make_jump_profile("one"),
      make_mark_measure(-2.0, 0.0, 1.0), make_initial_data("zero"), 1));
}

TEST_CASE("problem spec derived constants") {
  auto spec = make_problem_spec(
      make_flux("burgers"), make_diffusion("linear", 0.3),
      make_sigma("clamp", 0.5, 1.0), make_jump("linear", 1.0),
      make_jump_profile("one"), make_mark_measure(2.0, 0.0, 1.0),
      make_initial_data("gaussian", 1.0, 0.5), 1);
  CHECK(spec.lip_phi == doctest::Approx(0.3));
  CHECK(spec.lip_sigma == doctest::Approx(0.5));
  CHECK(spec.h_mass == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(spec.eta(3.0, 0.7) == doctest::Approx(3.0));

  // abs-capped profile on uniform marks over [0,1] with rate 2:
  // int h dm = 2 * int_0^1 z dz = 1 (trapezoid exact on linear)
  auto spec2 = make_problem_spec(
      make_flux("burgers"), make_diffusion("zero"), make_sigma("zero"),
      make_jump("linear", 1.0), make_jump_profile("abs-capped"),
      make_mark_measure(2.0, 0.0, 1.0),
      make_initial_data("gaussian", 1.0, 0.5), 1);
  CHECK(spec2.h_mass == doctest::Approx(1.0).epsilon(1e-12));
}
