#pragma once

#include <span>
#include <vector>

#include "stein/report.hpp"
#include "stein/stein_laplace.hpp"  // TestFunction

namespace stein {

// Solution f of x f'(x) + (k - x^2) f(x) = h(x) - E h(K), K ~ chi(k),
// evaluated through the density-weighted integral below the chi median and
// the equivalent tail form above it (switching forms keeps both integrand
// and prefactor well scaled in the tails).
class ChiSteinSolution {
 public:
  ChiSteinSolution(const TestFunction& h, double k);

  double f(double x) const;
  // Central finite difference of f (independent of the ODE, so the residual
  // check below is a real test of the quadrature solution).
  double f1(double x) const;
  double residual(double x) const;
  double expectation_h() const { return expectation_h_; }
  double median() const { return median_; }
  double scale_k() const { return k_; }

 private:
  double htilde(double x) const { return h_.value(x) - expectation_h_; }

  TestFunction h_;
  double k_;
  double median_;
  double expectation_h_;
  double tail_hi_;  // integration cutoff for E h and the median bracket
};

ChiSteinSolution chi_stein_solve(const TestFunction& h, double k);

// Sign-change constant M = max{F(m), 1-F(m)} / (s(m) rho(m)) at m = sqrt(k).
double schoutens_M(double k);
// The derived uniform solution bound Gamma(k/2) e^{k/2} / (2 (k/2)^{k/2}).
double chi_uniform_solution_bound(double k);

struct RayleighConstants {
  double x_star;    // intersection of I1/rho and I2/rho
  double c_xf;      // sup |x f(x)| <= c_xf ||h'||      (2.325)
  double c_fprime;  // sup |f'(x)|  <= c_fprime ||h'||  (6.11)
  double c_xfpp;    // sup |x f''(x)| <= c_xfpp ||h'||  (11.30)
};

// Locates x* by bisection on I1 - I2 (closed forms in erf) and composes the
// Lipschitz-class constants for the sigma = 1 Rayleigh Stein equation.
RayleighConstants rayleigh_constants();

// I1, I2 and the sigma = 1 Rayleigh density, exposed for the monotonicity
// property tests.
double rayleigh_I1(double x);
double rayleigh_I2(double x);
double rayleigh_density1(double x);

enum class MeanZeroOperator { rayleigh, scaled_beta };

// Quadrature of E[A f(Y)] against the exact density, where A is the Rayleigh
// operator x f' + (2 - 2x^2) f (Y the Rayleigh mixing variable) or the
// scaled-beta operator x(1 - x^2/n) f' + (2 - 2x^2) f (Y = U_n). Zero for
// admissible f; the returned magnitude is the numerical defect.
double operator_mean_zero_check(MeanZeroOperator which, const TestFunction& f,
                                int n = 0);

}  // namespace stein
