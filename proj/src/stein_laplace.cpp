#include "stein/stein_laplace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stein/quadrature.hpp"

namespace stein {

TestFunction smoothed_indicator(double a, double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("smoothed_indicator: eps must be positive");
  TestFunction h;
  h.name = "smoothed_indicator(a=" + std::to_string(a) +
           ",eps=" + std::to_string(eps) + ")";
  h.value = [a, eps](double x) {
    if (x <= a - eps) return 1.0;
    if (x >= a) return 0.0;
    return (a - x) / eps;
  };
  h.d1 = [a, eps](double x) {
    return (x > a - eps && x < a) ? -1.0 / eps : 0.0;
  };
  h.cls = TestClass::lipschitz;
  h.norm_htilde = 1.0;
  h.norm_d1 = 1.0 / eps;
  h.kinks = {a - eps, a};
  return h;
}

TestFunction indicator_halfline(double a) {
  TestFunction h;
  h.name = "indicator(x<=" + std::to_string(a) + ")";
  h.value = [a](double x) { return x <= a ? 1.0 : 0.0; };
  h.cls = TestClass::kolmogorov;
  h.norm_htilde = 1.0;
  h.kinks = {a};
  return h;
}

TestFunction identity_test_function() {
  TestFunction h;
  h.name = "identity";
  h.value = [](double x) { return x; };
  h.d1 = [](double) { return 1.0; };
  h.d2 = [](double) { return 0.0; };
  h.cls = TestClass::lipschitz;
  h.norm_d1 = 1.0;
  return h;
}

TestFunction sin_test_function() {
  TestFunction h;
  h.name = "sin";
  h.value = [](double x) { return std::sin(x); };
  h.d1 = [](double x) { return std::cos(x); };
  h.d2 = [](double x) { return -std::sin(x); };
  h.cls = TestClass::smooth12;
  h.norm_htilde = 1.0;  // E sin(Z) = 0 by symmetry
  h.norm_d1 = 1.0;
  h.norm_d2 = 1.0;
  return h;
}

TestFunction cos_smooth2_test_function(double omega) {
  if (omega == 0.0)
    throw std::invalid_argument("cos_smooth2_test_function: omega != 0");
  TestFunction h;
  h.name = "-cos(" + std::to_string(omega) + " x)/omega^2";
  const double w = omega;
  h.value = [w](double x) { return -std::cos(w * x) / (w * w); };
  h.d1 = [w](double x) { return std::sin(w * x) / w; };
  h.d2 = [w](double x) { return std::cos(w * x); };
  h.cls = TestClass::smooth2;
  h.norm_htilde = 2.0 / (w * w);
  h.norm_d1 = 1.0 / std::fabs(w);
  h.norm_d2 = 1.0;
  return h;
}

TestFunction rational_decay_test_function() {
  TestFunction h;
  h.name = "1/(1+x^2)";
  h.value = [](double x) { return 1.0 / (1.0 + x * x); };
  h.d1 = [](double x) {
    const double d = 1.0 + x * x;
    return -2.0 * x / (d * d);
  };
  h.cls = TestClass::bounded_lipschitz;
  h.norm_htilde = 1.0;
  h.norm_d1 = 0.6495190528383290;  // 3*sqrt(3)/8, attained at x = 1/sqrt(3)
  return h;
}

namespace {

constexpr double kTailFactor = 40.0;  // integrate s in [0, 40b]; e^{-40} tail

}  // namespace

LaplaceSteinSolution::LaplaceSteinSolution(const TestFunction& h, double b)
    : h_(h), b_(b) {
  if (!(b > 0.0))
    throw std::invalid_argument("solve_laplace_stein: b must be positive");
  // E h(Z) by exponential-weighted quadrature over both half-lines.
  const double T = kTailFactor * b;
  auto integrand_pos = [this](double t) {
    return std::exp(-t / b_) * h_.value(t);
  };
  auto integrand_neg = [this](double t) {
    return std::exp(-t / b_) * h_.value(-t);
  };
  std::vector<double> splits_pos, splits_neg;
  for (double k : h.kinks) {
    if (k > 0.0 && k < T) splits_pos.push_back(k);
    if (-k > 0.0 && -k < T) splits_neg.push_back(-k);
  }
  const QuadResult qp =
      integrate_split(integrand_pos, 0.0, T, splits_pos, 1e-11, 1e-13);
  const QuadResult qn =
      integrate_split(integrand_neg, 0.0, T, splits_neg, 1e-11, 1e-13);
  if (!qp.converged || !qn.converged)
    throw std::runtime_error(
        "solve_laplace_stein: quadrature for E h(Z) did not converge");
  expectation_h_ = (qp.value + qn.value) / (2.0 * b);
}

double LaplaceSteinSolution::side_integral(double x, bool right) const {
  // right: int_0^{40b} e^{-s/b} htilde(x+s) ds; left: same with htilde(x-s).
  const double T = kTailFactor * b_;
  const double sign = right ? 1.0 : -1.0;
  auto integrand = [this, x, sign](double s) {
    return std::exp(-s / b_) * htilde(x + sign * s);
  };
  std::vector<double> splits;
  for (double k : h_.kinks) {
    const double s = sign * (k - x);
    if (s > 0.0 && s < T) splits.push_back(s);
  }
  const QuadResult q = integrate_split(integrand, 0.0, T, splits, 1e-11, 1e-13);
  if (!q.converged)
    throw std::runtime_error(
        "solve_laplace_stein: quadrature did not converge at x = " +
        std::to_string(x));
  return q.value;
}

double LaplaceSteinSolution::f(double x) const {
  return -(side_integral(x, true) + side_integral(x, false)) / (2.0 * b_);
}

double LaplaceSteinSolution::f1(double x) const {
  return -(side_integral(x, true) - side_integral(x, false)) /
         (2.0 * b_ * b_);
}

double LaplaceSteinSolution::f2(double x) const {
  return (f(x) + htilde(x)) / (b_ * b_);
}

LaplaceSteinSolution solve_laplace_stein(const TestFunction& h, double b) {
  return LaplaceSteinSolution(h, b);
}

std::vector<BoundReport> verify_solution_bounds(const TestFunction& h, double b,
                                                std::span<const double> grid) {
  const LaplaceSteinSolution sol(h, b);
  const std::size_t n = grid.size();
  std::vector<double> af(n), af1(n), af2(n), af3(n), ratio(n);
  const double fd_step = 1e-4 * b;
  const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < nn; ++i) {
    const double x = grid[i];
    const double fx = sol.f(x);
    af[i] = std::fabs(fx);
    af1[i] = std::fabs(sol.f1(x));
    af2[i] = std::fabs((fx + sol.htilde(x)) / (b * b));
    af3[i] =
        std::fabs(sol.f2(x + fd_step) - sol.f2(x - fd_step)) / (2.0 * fd_step);
    ratio[i] = af[i] / (2.0 * b + std::fabs(x));
  }
  auto sup = [](const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end());
  };

  std::vector<BoundReport> reports;
  auto add = [&reports, &h, b](const std::string& name, double bound,
                               double observed, double rel_slack) {
    BoundReport r;
    r.name = name;
    r.inputs = {{"test_function", h.name}, {"b", b}};
    r.bound = bound;
    r.attach({observed, rel_slack * bound, "grid-sup"});
    reports.push_back(std::move(r));
  };

  const bool has_htilde = !std::isnan(h.norm_htilde);
  const bool has_d1 = !std::isnan(h.norm_d1);
  const bool has_d2 = !std::isnan(h.norm_d2);
  if (has_htilde) {
    add("firstbounds-f", h.norm_htilde, sup(af), 1e-6);
    add("firstbounds-f1", h.norm_htilde / b, sup(af1), 1e-6);
    add("firstbounds-f2", 2.0 * h.norm_htilde / (b * b), sup(af2), 1e-6);
  }
  if (has_d1) {
    add("nonuniform-f", h.norm_d1, sup(ratio), 1e-6);
    add("lipbounds-f1", h.norm_d1, sup(af1), 1e-6);
    add("lipbounds-f2", h.norm_d1 / b, sup(af2), 1e-6);
    // f''' comes from finite differences; allow looser slack for the
    // differencing error.
    add("lipbounds-f3", 2.0 * h.norm_d1 / (b * b), sup(af3), 1e-3);
  }
  if (has_d2) {
    add("lipbounds-k1-f2", h.norm_d2, sup(af2), 1e-6);
    add("lipbounds-k1-f3", h.norm_d2 / b, sup(af3), 1e-3);
  }
  return reports;
}

}  // namespace stein
