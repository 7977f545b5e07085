#include "stein/distributions.hpp"

#include <cmath>

#include "doctest.h"
#include "stein/metrics.hpp"
#include "stein/parallel.hpp"
#include "stein/quadrature.hpp"

using namespace stein;

TEST_SUITE_BEGIN("distributions");

namespace {

// Inverse-transform draws kept sorted for the DKW checks.
std::vector<double> draws(const DistributionHandle& h, std::size_t n,
                          std::uint64_t seed) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    SplitMix64 rng = substream(seed, i);
    out[i] = h.sampler(rng);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("laplace handle basics") {
  const DistributionHandle h = laplace_handle({0.0, 2.0});
  CHECK(h.density(0.0) == doctest::Approx(0.25).epsilon(1e-14));  // 1/(2b)
  // Var = 2 b^2
  CHECK(h.raw_moment(2) - h.raw_moment(1) * h.raw_moment(1) ==
        doctest::Approx(8.0).epsilon(1e-14));
  CHECK(h.abs_moment(1) == doctest::Approx(2.0).epsilon(1e-14));  // E|Z| = b
  CHECK_THROWS_AS(laplace_handle({0.0, -1.0}), std::invalid_argument);
}

TEST_CASE("laplace handle with nonzero location") {
  const DistributionHandle h = laplace_handle({1.5, 0.5});
  CHECK(h.raw_moment(1) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(h.raw_moment(2) - 1.5 * 1.5 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(h.cdf(1.5) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("rayleigh mixing variable U") {
  const DistributionHandle u = rayleigh_handle(1.0 / std::sqrt(2.0));
  for (double x : {0.2, 0.7, 1.3, 2.4}) {
    CHECK(u.density(x) ==
          doctest::Approx(2.0 * x * std::exp(-x * x)).epsilon(1e-13));
    CHECK(u.cdf(x) == doctest::Approx(1.0 - std::exp(-x * x)).epsilon(1e-13));
  }
  CHECK(u.raw_moment(1) ==
        doctest::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-13));
  CHECK(u.raw_moment(2) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(rayleigh_handle(0.0), std::invalid_argument);
}

TEST_CASE("chi handle") {
  const DistributionHandle k2 = chi_handle(2.0);
  for (double x : {0.3, 1.0, 2.2})
    CHECK(k2.density(x) ==
          doctest::Approx(x * std::exp(-0.5 * x * x)).epsilon(1e-13));

  // mode of chi(3) at sqrt(k-1) = sqrt(2), located by golden search
  const DistributionHandle k3 = chi_handle(3.0);
  double arg = 0.0;
  golden_maximize([&k3](double x) { return k3.density(x); }, 0.1, 4.0, 1e-10,
                  &arg);
  CHECK(arg == doctest::Approx(std::sqrt(2.0)).epsilon(1e-7));

  // unit mass
  for (double k : {1.0, 2.0, 5.5}) {
    const DistributionHandle h = chi_handle(k);
    const QuadResult q =
        integrate([&h](double x) { return h.density(x); }, 0.0, 16.0, 1e-11);
    CHECK(q.value == doctest::Approx(1.0).epsilon(1e-10));
  }
  // k < 1 has an integrable singularity at 0; substitute u = x^k so the
  // transformed integrand (1/k) e^{-u^{2/k}/2} is smooth.
  {
    const double k = 0.7;
    const DistributionHandle h = chi_handle(k);
    const double head = integrate(
                            [k](double u) {
                              return std::exp(-0.5 * std::pow(u, 2.0 / k)) / k;
                            },
                            0.0, 1.0, 1e-12)
                            .value *
                        h.density(1.0) * std::exp(0.5);
    const double tail =
        integrate([&h](double x) { return h.density(x); }, 1.0, 16.0, 1e-12)
            .value;
    CHECK(head + tail == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(chi_handle(-1.0), std::invalid_argument);
}

TEST_CASE("scaled beta root moments") {
  CHECK(scaled_beta_root_moment(7, 2) == 1.0);
  CHECK(scaled_beta_root_moment(2, 3) ==
        doctest::Approx(std::pow(2.0, 2.5) / 5.0).epsilon(1e-13));
  // increasing in n, bounded by 3 sqrt(pi) / 4
  const double limit = 0.75 * std::sqrt(M_PI);
  double prev = 0.0;
  for (int n = 2; n <= 400; n += 7) {
    const double m3 = scaled_beta_root_moment(n, 3);
    CHECK(m3 > prev);
    CHECK(m3 <= limit);
    prev = m3;
  }
  CHECK(scaled_beta_root_moment(100000, 3) ==
        doctest::Approx(limit).epsilon(1e-4));
  CHECK_THROWS_AS(scaled_beta_root_moment(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(scaled_beta_root_moment(5, 7), std::invalid_argument);
}

TEST_CASE("U_n handle matches the closed-form cdf") {
  const DistributionHandle u10 = scaled_beta_root_handle(10);
  for (double x : {0.3, 1.0, 2.0, 3.0}) {
    const double expected = 1.0 - std::pow(1.0 - x * x / 10.0, 9.0);
    CHECK(u10.cdf(x) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(u10.support_hi == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("geometric sampler") {
  CHECK_THROWS_AS(geometric_mean_inverse(1.5), std::invalid_argument);
  const double p = 0.1;
  const std::size_t n = 1000000;
  std::size_t ones = 0;
  std::vector<double> vals(n), inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    SplitMix64 rng = substream(99, i);
    const std::int64_t k = geometric_sample(p, rng);
    REQUIRE(k >= 1);
    vals[i] = static_cast<double>(k);
    inv[i] = 1.0 / static_cast<double>(k);
    if (k == 1) ++ones;
  }
  // P(N = 1) = p
  CHECK(static_cast<double>(ones) / n == doctest::Approx(p).epsilon(0.02));
  // E N = 1/p within 3 standard errors, SE = sqrt((1-p)/p^2/n)
  const double se = std::sqrt((1.0 - p) / (p * p) / n);
  CHECK(std::fabs(pairwise_mean(vals) - 10.0) <= 3.0 * se);
  // E[1/N] = p log(1/p) / (1-p)
  const double target = geometric_mean_inverse(p);
  CHECK(target == doctest::Approx(0.2558427881).epsilon(1e-8));
  const double m = pairwise_mean(inv);
  const double se_inv = std::sqrt(pairwise_variance(inv, m) / n);
  CHECK(std::fabs(m - target) <= 3.0 * se_inv);
}

TEST_CASE("summand library moments") {
  const auto lib = summand_library();
  REQUIRE(lib.size() >= 4);

  const SummandSpec rad = rademacher_summand(1.0);
  CHECK(rad.sigma2 == 1.0);
  CHECK(rad.third_moment == 0.0);
  CHECK(rad.fourth_moment == 1.0);
  CHECK(rad.abs_moment(3) == 1.0);

  const SummandSpec uni = uniform_summand(std::sqrt(3.0));
  CHECK(uni.sigma2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(uni.fourth_moment == doctest::Approx(9.0 / 5.0).epsilon(1e-14));

  const SummandSpec lap = laplace_summand(1.0);
  CHECK(lap.sigma2 == 2.0);
  CHECK(lap.abs_moment(3) == doctest::Approx(6.0).epsilon(1e-14));

  const SummandSpec two = two_point_summand(1.0, 2.0);
  // mean is exactly zero: q alpha = (1-q) beta
  CHECK(two.handle.raw_moment(1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(two.sigma2 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(two.third_moment == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("summand sampled mean and variance") {
  const std::size_t n = 200000;
  for (const SummandSpec& spec : summand_library()) {
    CAPTURE(spec.name);
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
      SplitMix64 rng = substream(7, i);
      xs[i] = spec.handle.sampler(rng);
    }
    const double mean = pairwise_mean(xs);
    const double var = pairwise_variance(xs, mean);
    CHECK(std::fabs(mean) <= 4.0 * spec.sigma() / std::sqrt(double(n)));
    CHECK(std::fabs(var - spec.sigma2) <= 0.01 * spec.sigma2 * 2.5);
  }
}

TEST_CASE("quantile is the inverse cdf on the support interior") {
  std::vector<DistributionHandle> handles = {
      laplace_handle({0.0, 1.0}), normal_handle(1.0), rayleigh_handle(0.8),
      chi_handle(2.0),            beta1m_handle(9),   scaled_beta_root_handle(10)};
  for (const DistributionHandle& h : handles) {
    CAPTURE(h.name);
    const double lo =
        std::isfinite(h.support_lo) ? h.support_lo : h.quantile(1e-9);
    const double hi =
        std::isfinite(h.support_hi) ? h.support_hi : h.quantile(1.0 - 1e-9);
    for (int i = 1; i < 1000; ++i) {
      const double x = lo + (hi - lo) * i / 1000.0;
      const double u = h.cdf(x);
      if (u <= 0.0 || u >= 1.0) continue;
      CHECK(std::fabs(h.quantile(u) - x) <=
            1e-8 * std::max(1.0, std::fabs(x)));
    }
  }
}

TEST_CASE("sampler matches cdf at DKW resolution") {
  const std::size_t n = 1000000;
  std::vector<DistributionHandle> handles = {
      laplace_handle({0.0, 1.0}), rayleigh_handle(1.0 / std::sqrt(2.0)),
      scaled_beta_root_handle(10)};
  int idx = 0;
  for (const DistributionHandle& h : handles) {
    CAPTURE(h.name);
    const std::vector<double> xs = draws(h, n, 1000 + idx++);
    const DistanceEstimate ks = kolmogorov_empirical(xs, h.cdf);
    CHECK(ks.value <= ks.error_bound);  // 99% DKW radius
  }
}

TEST_CASE("summand JSON round trip") {
  for (const SummandSpec& spec : summand_library()) {
    const nlohmann::json j = summand_to_json(spec);
    const SummandSpec back = summand_from_json(j);
    CHECK(back.name == spec.name);
    CHECK(back.sigma2 == doctest::Approx(spec.sigma2).epsilon(1e-15));
    CHECK(back.fourth_moment ==
          doctest::Approx(spec.fourth_moment).epsilon(1e-15));
  }
  CHECK_THROWS_AS(summand_from_json({{"name", "cauchy"}}),
                  std::invalid_argument);
}

TEST_SUITE_END();
