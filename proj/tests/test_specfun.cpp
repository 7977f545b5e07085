#include "stein/specfun.hpp"

#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "doctest.h"

using stein::gamma_ratio;
using stein::hyp2f1_terminating;
using stein::log_gamma;
using stein::normal_cdf;
using stein::normal_quantile;
using stein::reg_gamma_p;
using stein::reg_gamma_q;

TEST_SUITE_BEGIN("specfun");

TEST_CASE("log_gamma at small exact values") {
  CHECK(std::fabs(log_gamma(1.0)) < 1e-13);
  CHECK(std::fabs(log_gamma(2.0)) < 1e-13);
  // Gamma(5/2) = 3 sqrt(pi) / 4
  CHECK(log_gamma(2.5) ==
        doctest::Approx(std::log(0.75 * std::sqrt(M_PI))).epsilon(1e-13));
  // Gamma(10) = 9!
  CHECK(log_gamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-14));
}

TEST_CASE("log_gamma against the C library across the required range") {
  for (double x : {0.5, 0.7, 1.0, 1.5, 2.0, 3.7, 10.0, 57.0, 123.4, 1e3, 4.2e4,
                   1e6}) {
    const double ours = log_gamma(x);
    const double ref = std::lgamma(x);
    CHECK(std::fabs(ours - ref) <= 1e-12 * std::max(1.0, std::fabs(ref)));
  }
}

TEST_CASE("log_gamma recurrence property") {
  for (double x = 0.5; x <= 50.0; x += 0.5) {
    const double lhs = log_gamma(x + 1.0);
    const double rhs = std::log(x) + log_gamma(x);
    CHECK(std::fabs(lhs - rhs) <= 1e-10 * std::max(1.0, std::fabs(rhs)));
  }
}

TEST_CASE("log_gamma rejects nonpositive input") {
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-2.5), std::domain_error);
}

TEST_CASE("gamma_ratio exact values") {
  CHECK(gamma_ratio(3.0, 2.0) == doctest::Approx(2.0).epsilon(1e-13));
  // Gamma(3.5) = 15 sqrt(pi) / 8
  CHECK(gamma_ratio(2.0, 3.5) ==
        doctest::Approx(8.0 / (15.0 * std::sqrt(M_PI))).epsilon(1e-12));
  CHECK_THROWS_AS(gamma_ratio(-1.0, 2.0), std::domain_error);
}

TEST_CASE("gamma_ratio large-argument limit") {
  // n^{3/2} Gamma(n) / Gamma(n + 3/2) -> 1
  const double n = 1e5;
  const double v = std::pow(n, 1.5) * gamma_ratio(n, n + 1.5);
  CHECK(std::fabs(v - 1.0) < 1e-4);
  // stays finite out to n = 1e6
  CHECK(std::isfinite(gamma_ratio(1e6, 1e6 + 1.5)));
}

TEST_CASE("erf basics") {
  CHECK(stein::erf(0.0) == 0.0);
  CHECK(stein::erf(1.0) == doctest::Approx(0.8427007929497149).epsilon(1e-12));
  CHECK(stein::erf(10.0) >= 1.0 - 1e-12);
  for (double x : {0.3, 0.9, 1.7, 2.9, 3.4, 5.0})
    CHECK(stein::erf(-x) == doctest::Approx(-stein::erf(x)).epsilon(1e-15));
}

TEST_CASE("erf monotone and matches the C library") {
  double prev = -1.0;
  for (double x = -6.0; x <= 6.0; x += 0.05) {
    const double v = stein::erf(x);
    CHECK(v >= prev);
    prev = v;
    CHECK(std::fabs(v - std::erf(x)) <= 1e-13);
  }
}

TEST_CASE("erfc complements erf") {
  for (double x : {-4.0, -1.0, 0.0, 0.5, 2.0, 4.0, 8.0})
    CHECK(stein::erf(x) + stein::erfc(x) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("regularised incomplete gamma") {
  // P(1, x) = 1 - e^{-x}
  for (double x : {0.1, 1.0, 3.0, 10.0})
    CHECK(reg_gamma_p(1.0, x) == doctest::Approx(-std::expm1(-x)).epsilon(1e-13));
  // chi-square(2) median: P(1, ln 2) = 1/2
  CHECK(reg_gamma_p(1.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(reg_gamma_p(2.5, 1.3) + reg_gamma_q(2.5, 1.3) ==
        doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("normal quantile round trip") {
  for (double u : {1e-10, 1e-4, 0.02, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-9}) {
    const double x = normal_quantile(u);
    CHECK(normal_cdf(x) == doctest::Approx(u).epsilon(1e-12));
  }
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("terminating 2F1") {
  // b = 0: empty product
  CHECK(hyp2f1_terminating(0.7, 0.0, 1.3, 0.9) == 1.0);
  // b = -1: 1 + a x / c
  for (double x : {-1.0, 0.2, 0.7, 1.0})
    CHECK(hyp2f1_terminating(-0.5, -1.0, 0.5, x) ==
          doctest::Approx(1.0 + x).epsilon(1e-15));
  // b = -2 at x = 1: exact rational arithmetic gives 1 + 2 - 1/3 = 8/3
  CHECK(hyp2f1_terminating(-0.5, -2.0, 0.5, 1.0) ==
        doctest::Approx(8.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("terminating 2F1 equals exact rational evaluation on integer inputs") {
  // 2F1(-1, -3; 2; x) = 1 + 3x/2 with a = -1 terminating after one term...
  // direct finite-sum cross-check with small rational Pochhammers:
  // 2F1(2, -3; 3; 1) = sum_j (2)_j (-3)_j / ((3)_j j!) = 1 - 2 + 8/5 - ...
  const double direct = 1.0 + (2.0 * -3.0) / (3.0 * 1.0) +
                        (2.0 * 3.0) * (-3.0 * -2.0) / ((3.0 * 4.0) * 2.0) +
                        (2.0 * 3.0 * 4.0) * (-3.0 * -2.0 * -1.0) /
                            ((3.0 * 4.0 * 5.0) * 6.0);
  CHECK(hyp2f1_terminating(2.0, -3.0, 3.0, 1.0) ==
        doctest::Approx(direct).epsilon(1e-15));
}

TEST_CASE("terminating 2F1 rejects bad b") {
  CHECK_THROWS_AS(hyp2f1_terminating(1.0, -1.5, 2.0, 0.3), std::domain_error);
  CHECK_THROWS_AS(hyp2f1_terminating(1.0, 2.0, 2.0, 0.3), std::domain_error);
}

TEST_SUITE_END();
