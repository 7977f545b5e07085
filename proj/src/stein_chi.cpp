#include "stein/stein_chi.hpp"

#include <cmath>
#include <stdexcept>

#include "stein/distributions.hpp"
#include "stein/quadrature.hpp"
#include "stein/specfun.hpp"

namespace stein {

namespace {

double chi_log_norm(double k) {
  return (0.5 * k - 1.0) * std::log(2.0) + log_gamma(0.5 * k);
}

double chi_density(double k, double log_norm, double x) {
  if (x <= 0.0) return 0.0;
  return std::exp((k - 1.0) * std::log(x) - 0.5 * x * x - log_norm);
}

}  // namespace

ChiSteinSolution::ChiSteinSolution(const TestFunction& h, double k)
    : h_(h), k_(k) {
  if (!(k > 0.0))
    throw std::invalid_argument("chi_stein_solve: k must be positive");
  const double log_norm = chi_log_norm(k);
  // Cutoff where the remaining chi mass is far below quadrature tolerance.
  tail_hi_ = std::sqrt(k + 2.0 * 90.0);
  auto weighted = [k, log_norm, this](double t) {
    return h_.value(t) * chi_density(k, log_norm, t);
  };
  const QuadResult q =
      integrate_split(weighted, 0.0, tail_hi_, h_.kinks, 1e-12, 1e-13);
  if (!q.converged)
    throw std::runtime_error("chi_stein_solve: E h(K) quadrature failed");
  expectation_h_ = q.value;
  median_ = bisect(
      [k](double x) { return reg_gamma_p(0.5 * k, 0.5 * x * x) - 0.5; }, 1e-8,
      tail_hi_, 1e-12);
}

double ChiSteinSolution::f(double x) const {
  if (!(x > 0.0))
    throw std::domain_error("ChiSteinSolution::f: x must be positive");
  if (x <= median_) {
    // f(x) = e^{x^2/2} int_0^1 htilde(xv) v^{k-1} e^{-x^2 v^2 / 2} dv
    auto integrand = [this, x](double v) {
      return htilde(x * v) * std::pow(v, k_ - 1.0) *
             std::exp(-0.5 * x * x * v * v);
    };
    std::vector<double> splits;
    for (double kk : h_.kinks)
      if (kk > 0.0 && kk < x) splits.push_back(kk / x);
    const QuadResult q =
        integrate_split(integrand, 0.0, 1.0, splits, 1e-12, 1e-13);
    if (!q.converged)
      throw std::runtime_error(
          "chi_stein_solve: quadrature did not converge at x = " +
          std::to_string(x));
    return std::exp(0.5 * x * x) * q.value;
  }
  // f(x) = -(1/x) int_0^S htilde(x+s) (1+s/x)^{k-1} e^{-xs - s^2/2} ds
  const double s_max = -x + std::sqrt(x * x + 240.0);
  auto integrand = [this, x](double s) {
    return htilde(x + s) * std::pow(1.0 + s / x, k_ - 1.0) *
           std::exp(-x * s - 0.5 * s * s);
  };
  std::vector<double> splits;
  for (double kk : h_.kinks) {
    const double s = kk - x;
    if (s > 0.0 && s < s_max) splits.push_back(s);
  }
  const QuadResult q =
      integrate_split(integrand, 0.0, s_max, splits, 1e-12, 1e-13);
  if (!q.converged)
    throw std::runtime_error(
        "chi_stein_solve: quadrature did not converge at x = " +
        std::to_string(x));
  return -q.value / x;
}

double ChiSteinSolution::f1(double x) const {
  const double step = 1e-5 * std::max(1.0, x);
  const double lo = std::max(x - step, 0.25 * x);
  return (f(x + step) - f(lo)) / (x + step - lo);
}

double ChiSteinSolution::residual(double x) const {
  return x * f1(x) + (k_ - x * x) * f(x) - htilde(x);
}

ChiSteinSolution chi_stein_solve(const TestFunction& h, double k) {
  return ChiSteinSolution(h, k);
}

double schoutens_M(double k) {
  if (!(k > 0.0)) throw std::invalid_argument("schoutens_M: k > 0 required");
  const double m = std::sqrt(k);
  const double F = reg_gamma_p(0.5 * k, 0.5 * k);
  const double rho = chi_density(k, chi_log_norm(k), m);
  return std::max(F, 1.0 - F) / (m * rho);
}

double chi_uniform_solution_bound(double k) {
  if (!(k > 0.0))
    throw std::invalid_argument("chi_uniform_solution_bound: k > 0 required");
  return std::exp(log_gamma(0.5 * k) + 0.5 * k - 0.5 * k * std::log(0.5 * k)) /
         2.0;
}

namespace {

constexpr double kSqrtHalfPi = 1.2533141373155002512078826424055;  // sqrt(pi/2)
constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

}  // namespace

double rayleigh_I1(double x) {
  const double e = std::exp(-0.5 * x * x);
  return kSqrtHalfPi * (1.0 - e) + kSqrtHalfPi * erf(x * kInvSqrt2) - x * e;
}

double rayleigh_I2(double x) {
  const double e = std::exp(-0.5 * x * x);
  return kSqrtHalfPi * (1.0 + e) - kSqrtHalfPi * erf(x * kInvSqrt2) + x * e;
}

double rayleigh_density1(double x) { return x * std::exp(-0.5 * x * x); }

RayleighConstants rayleigh_constants() {
  RayleighConstants rc;
  rc.x_star = bisect(
      [](double x) { return rayleigh_I1(x) - rayleigh_I2(x); }, 0.5, 3.0,
      1e-10);
  rc.c_xf = rayleigh_I1(rc.x_star) / rayleigh_density1(rc.x_star);
  const double chi3 = chi_uniform_solution_bound(3.0);
  rc.c_fprime = chi3 * (1.0 + 2.0 * rc.c_xf);
  rc.c_xfpp = 2.0 * (1.0 + 2.0 * rc.c_xf);
  return rc;
}

double operator_mean_zero_check(MeanZeroOperator which, const TestFunction& f,
                                int n) {
  if (!f.value || !f.d1)
    throw std::invalid_argument(
        "operator_mean_zero_check: f and f' evaluators required");
  if (which == MeanZeroOperator::rayleigh) {
    // E[x f' + (2 - 2x^2) f] against the density 2x e^{-x^2}.
    auto integrand = [&f](double x) {
      return (x * f.d1(x) + (2.0 - 2.0 * x * x) * f.value(x)) * 2.0 * x *
             std::exp(-x * x);
    };
    const QuadResult q = integrate(integrand, 0.0, 9.0, 1e-10, 1e-13);
    return std::fabs(q.value);
  }
  if (n < 2)
    throw std::invalid_argument("operator_mean_zero_check: n >= 2 required");
  const DistributionHandle un = scaled_beta_root_handle(n);
  auto integrand = [&f, &un, n](double x) {
    return (x * (1.0 - x * x / n) * f.d1(x) +
            (2.0 - 2.0 * x * x) * f.value(x)) *
           un.density(x);
  };
  const QuadResult q =
      integrate(integrand, 0.0, std::sqrt(static_cast<double>(n)), 1e-10,
                1e-13, 8000);
  return std::fabs(q.value);
}

}  // namespace stein
