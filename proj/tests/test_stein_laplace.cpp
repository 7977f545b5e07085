#include "stein/stein_laplace.hpp"

#include <cmath>

#include "doctest.h"
#include "stein/distributions.hpp"
#include "stein/quadrature.hpp"

using namespace stein;

TEST_SUITE_BEGIN("stein_laplace");

namespace {

std::vector<double> grid_points(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1.0);
  return g;
}

std::vector<TestFunction> catalog() {
  return {smoothed_indicator(0.5, 0.7), smoothed_indicator(-1.0, 0.1),
          sin_test_function(), rational_decay_test_function(),
          cos_smooth2_test_function(1.3)};
}

}  // namespace

TEST_CASE("smoothed indicator shape") {
  const TestFunction h = smoothed_indicator(1.0, 0.4);
  CHECK(h.value(1.0) == 0.0);
  CHECK(h.value(0.6) == 1.0);
  CHECK(h.value(0.8) == doctest::Approx(0.5));
  CHECK(h.norm_d1 == doctest::Approx(2.5));
  // eps -> 0 recovers the half-line indicator pointwise off x = a
  for (double x : {-2.0, 0.3, 0.999, 1.001, 4.0}) {
    const TestFunction tight = smoothed_indicator(1.0, 1e-12);
    CHECK(tight.value(x) == (x <= 1.0 ? 1.0 : 0.0));
  }
  CHECK_THROWS_AS(smoothed_indicator(0.0, -1.0), std::invalid_argument);
}

TEST_CASE("declared norms are grid-verified upper bounds") {
  const DistributionHandle z = laplace_handle({0.0, 1.0});
  for (const TestFunction& h : catalog()) {
    CAPTURE(h.name);
    const LaplaceSteinSolution sol(h, 1.0);
    for (int i = 0; i <= 400; ++i) {
      const double x = -8.0 + 16.0 * i / 400.0;
      if (!std::isnan(h.norm_htilde))
        CHECK(std::fabs(h.value(x) - sol.expectation_h()) <=
              h.norm_htilde * (1.0 + 1e-12));
      if (h.d1 && !std::isnan(h.norm_d1))
        CHECK(std::fabs(h.d1(x)) <= h.norm_d1 * (1.0 + 1e-12));
      if (h.d2 && !std::isnan(h.norm_d2))
        CHECK(std::fabs(h.d2(x)) <= h.norm_d2 * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("solution satisfies the differential equation") {
  for (double b : {0.5, 1.0}) {
    for (const TestFunction& h : catalog()) {
      CAPTURE(h.name);
      CAPTURE(b);
      const LaplaceSteinSolution sol(h, b);
      double worst = 0.0;
      for (double x : grid_points(-10.0 * b, 10.0 * b, 200))
        worst = std::max(worst, std::fabs(sol.residual(x)));
      CHECK(worst <= 1e-6);
    }
  }
}

TEST_CASE("the sign convention is the one that zeroes the residual") {
  const TestFunction h = smoothed_indicator(0.0, 0.5);
  const LaplaceSteinSolution sol(h, 1.0);
  const double x = 1.3;
  // Flipping the solution's sign leaves a residual of -2*htilde instead.
  const double flipped =
      -sol.f2(x) * 1.0 - (-sol.f(x)) - sol.htilde(x);
  CHECK(std::fabs(flipped + 2.0 * sol.htilde(x)) < 1e-6);
  CHECK(std::fabs(sol.htilde(x)) > 1e-3);  // the check is not vacuous
  CHECK(std::fabs(sol.residual(x)) <= 1e-8);
}

TEST_CASE("solution vanishes at the origin") {
  for (const TestFunction& h : catalog()) {
    CAPTURE(h.name);
    const LaplaceSteinSolution sol(h, 1.0);
    CHECK(std::fabs(sol.f(0.0)) <= 1e-9);
  }
}

TEST_CASE("analytic derivative matches finite differences") {
  const LaplaceSteinSolution sol(sin_test_function(), 0.7);
  const double step = 1e-4 * 0.7;
  for (double x : grid_points(-3.0, 3.0, 41)) {
    const double fd = (sol.f(x + step) - sol.f(x - step)) / (2.0 * step);
    CHECK(std::fabs(sol.f1(x) - fd) <= 1e-5);
  }
}

TEST_CASE("linear test function has the explicit solution -x") {
  const LaplaceSteinSolution sol(identity_test_function(), 1.3);
  for (double x : {-4.0, -1.0, 0.5, 2.0, 7.0}) {
    CHECK(sol.f(x) == doctest::Approx(-x).epsilon(1e-9));
    CHECK(sol.f1(x) == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(std::fabs(sol.f(x)) <=
          (2.0 * 1.3 + std::fabs(x)) * (1.0 + 1e-12));  // strict slack 2b
  }
}

TEST_CASE("characterization expectation vanishes for the solution") {
  // E[b^2 f''(Z) - f(Z) + f(0)] = E htilde(Z) = 0 for decaying h.
  const double b = 1.0;
  const LaplaceSteinSolution sol(rational_decay_test_function(), b);
  const DistributionHandle z = laplace_handle({0.0, b});
  auto integrand = [&](double x) {
    return (b * b * sol.f2(x) - sol.f(x)) * z.density(x);
  };
  const QuadResult q = integrate(integrand, -40.0, 40.0, 1e-8, 1e-9, 2000);
  CHECK(std::fabs(q.value + sol.f(0.0)) <= 1e-6);
}

TEST_CASE("uniform bounds for bounded test functions") {
  const DistributionHandle z = laplace_handle({0.0, 1.0});
  for (double b : {0.5, 1.0, 2.0}) {
    const TestFunction h = smoothed_indicator(0.3, 0.8);
    const auto reports =
        verify_solution_bounds(h, b, grid_points(-10.0 * b, 10.0 * b, 200));
    for (const BoundReport& r : reports) {
      CAPTURE(r.name);
      CHECK(r.satisfied.value());
    }
  }
}

TEST_CASE("lipschitz bounds for sin") {
  const auto reports = verify_solution_bounds(
      sin_test_function(), 1.0, grid_points(-10.0, 10.0, 200));
  bool saw_f1 = false;
  for (const BoundReport& r : reports) {
    CAPTURE(r.name);
    CHECK(r.satisfied.value());
    if (r.name == "lipbounds-f1") {
      saw_f1 = true;
      CHECK(r.bound == 1.0);  // ||f'|| <= ||h'|| = 1
      CHECK(r.empirical->value <= 1.0 + 1e-6);
    }
  }
  CHECK(saw_f1);
}

TEST_CASE("second derivative bound at b = 1/2") {
  // smoothed indicator has ||htilde|| <= 1, so ||f''|| <= 2/b^2 = 8
  const auto reports = verify_solution_bounds(
      smoothed_indicator(0.0, 1.0), 0.5, grid_points(-5.0, 5.0, 200));
  for (const BoundReport& r : reports) {
    if (r.name == "firstbounds-f2") {
      CHECK(r.bound == doctest::Approx(8.0));
      CHECK(r.empirical->value <= 8.0 * (1.0 + 1e-6));
    }
  }
}

TEST_SUITE_END();
