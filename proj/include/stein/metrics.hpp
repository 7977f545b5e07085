#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>

#include "stein/distributions.hpp"
#include "stein/report.hpp"

namespace stein {

// 99% Dvoretzky-Kiefer-Wolfowitz radius sqrt(log(2/alpha)/(2n)).
double dkw_radius(std::size_t n, double alpha = 0.01);

// sup_z |F1(z) - F2(z)| between closed-form CDFs: dense grid over the joint
// support plus golden-section refinement around the leading grid maxima.
DistanceEstimate kolmogorov_exact(const DistributionHandle& f1,
                                  const DistributionHandle& f2);

// One-sample Kolmogorov statistic of a sorted sample against a CDF;
// error_bound is the 99% DKW radius.
DistanceEstimate kolmogorov_empirical(std::span<const double> sorted_sample,
                                      const std::function<double(double)>& cdf);

// d_W = int |F1 - F2| dx between closed-form CDFs (adaptive quadrature with
// analytic tail remainders folded into error_bound).
DistanceEstimate wasserstein1_cdf(const DistributionHandle& f1,
                                  const DistributionHandle& f2);

// Exact piecewise integral of |F_n - F| between an empirical CDF and a
// continuous CDF. Between consecutive order statistics F is monotone, so the
// integrand changes sign at most once, at F(x) = i/n, located by one
// quantile evaluation. error_bound carries the Monte Carlo sampling error
// (3x the mean-Wasserstein bound int sqrt(F(1-F))/sqrt(n)) plus quadrature
// tails.
DistanceEstimate wasserstein1_sample(std::span<const double> sorted_sample,
                                     const DistributionHandle& f);

using CharacteristicFunction = std::function<std::complex<double>(double)>;

// Lower bound for d_2 from test functions -cos(wx)/w^2 and -sin(wx)/w^2
// (both have ||h''|| = 1): sup over the omega grid of
// max(|Re dphi|, |Im dphi|)/w^2.
double d2_lower_bound_cf(const CharacteristicFunction& phi1,
                         const CharacteristicFunction& phi2,
                         std::span<const double> omegas);

// Same lower bound restricted to omega >= 1, where ||h'|| = 1/omega <= 1
// keeps the test functions inside the d_{1,2} class.
double d12_lower_bound_cf(const CharacteristicFunction& phi1,
                          const CharacteristicFunction& phi2,
                          std::span<const double> omegas);

// Closed-form characteristic functions for the compound geometric sum
// sqrt(p) sum_{i<=N_p} X_i and for Laplace(0,b).
std::complex<double> geometric_sum_cf(const SummandSpec& spec, double p,
                                      double t);
std::complex<double> laplace_cf(double b, double t);

struct ConcentrationCheck {
  double probability;  // empirical P(alpha <= W <= beta)
  double rhs;          // (beta-alpha)/(2b) + 2 d_K + slack
  bool pass;
};

// Interval-probability inequality against the Laplace law: the empirical
// interval mass must not exceed (beta-alpha)/(2b) + 2 d_K(W,Z) plus Monte
// Carlo slack.
ConcentrationCheck concentration_check(std::span<const double> sorted_sample,
                                       const LaplaceParams& laplace,
                                       double alpha, double beta);

struct ProductMetricCheck {
  double lhs;
  double lhs_error;
  double rhs;
  bool pass;
};

enum class ProductMetric { kolmogorov, wasserstein };

// Sub-multiplicativity of distances between products of independent pairs:
// d(Y1 Z1, Y2 Z2) bounded by the component distances. The left side is
// estimated by Monte Carlo (two product samples), the right side from exact
// CDF computations.
ProductMetricCheck product_metric_check(const DistributionHandle& y1,
                                        const DistributionHandle& y2,
                                        const DistributionHandle& z1,
                                        const DistributionHandle& z2,
                                        ProductMetric metric, std::size_t n,
                                        std::uint64_t seed);

}  // namespace stein
