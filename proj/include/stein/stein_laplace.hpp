#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stein/report.hpp"

namespace stein {

enum class TestClass {
  kolmogorov,        // indicator of a half-line
  lipschitz,         // ||h'|| declared
  bounded_lipschitz, // ||h|| and ||h'|| declared
  smooth2,           // h' Lipschitz, ||h''|| declared
  smooth12           // ||h'|| and ||h''|| declared
};

// Test function with whatever derivative evaluators and sup-norm metadata
// the family provides. Declared norms are upper bounds, verified on a grid
// by the unit tests. `kinks` lists the points where quadratures must split.
struct TestFunction {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  TestClass cls = TestClass::lipschitz;
  double norm_htilde = std::nan("");
  double norm_d1 = std::nan("");
  double norm_d2 = std::nan("");
  std::vector<double> kinks;
};

// h_{a,eps}(x): 1 for x <= a-eps, 0 for x >= a, linear in between;
// Lipschitz with ||h'|| = 1/eps and ||h - E h|| <= 1.
TestFunction smoothed_indicator(double a, double eps);
// eps -> 0 limit: the half-line indicator 1(x <= a).
TestFunction indicator_halfline(double a);
TestFunction identity_test_function();           // h(x) = x
TestFunction sin_test_function();                // ||h'|| = 1
TestFunction cos_smooth2_test_function(double omega);  // -cos(wx)/w^2, ||h''|| = 1
TestFunction rational_decay_test_function();     // 1/(1+x^2)

// Solution f of b^2 f'' - f = h - E h(Z), f(0) = 0, Z ~ Laplace(0,b),
// evaluated by exponential-weighted quadrature. The bounded solution carries
// a minus sign in front of the two-sided integral splitting (fixed here by
// the residual test: b^2 f'' - f - htilde vanishes on the grid).
class LaplaceSteinSolution {
 public:
  LaplaceSteinSolution(const TestFunction& h, double b);

  double f(double x) const;
  double f1(double x) const;
  double f2(double x) const;  // recovered algebraically from the ODE
  double expectation_h() const { return expectation_h_; }
  double htilde(double x) const { return h_.value(x) - expectation_h_; }
  double residual(double x) const {
    return b_ * b_ * f2(x) - f(x) - htilde(x);
  }
  const TestFunction& test_function() const { return h_; }
  double scale() const { return b_; }

 private:
  double side_integral(double x, bool right) const;

  TestFunction h_;
  double b_;
  double expectation_h_;
};

LaplaceSteinSolution solve_laplace_stein(const TestFunction& h, double b);

// Grid verification of every solution bound applicable to the class of h:
// the uniform bounds for bounded h, the non-uniform linear-growth bound and
// the derivative bounds for Lipschitz h (third derivative via finite
// differences of f''). Reports carry observed sup as `empirical`.
std::vector<BoundReport> verify_solution_bounds(const TestFunction& h, double b,
                                                std::span<const double> grid);

}  // namespace stein
