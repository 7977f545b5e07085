#include "stein/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stein/parallel.hpp"
#include "stein/quadrature.hpp"

namespace stein {

namespace {

constexpr double kTailMass = 1e-16;

double support_lo_for(const DistributionHandle& h) {
  if (std::isfinite(h.support_lo)) return h.support_lo;
  return h.quantile(kTailMass);
}

double support_hi_for(const DistributionHandle& h) {
  if (std::isfinite(h.support_hi)) return h.support_hi;
  return h.quantile(1.0 - kTailMass);
}

}  // namespace

double dkw_radius(std::size_t n, double alpha) {
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

DistanceEstimate kolmogorov_exact(const DistributionHandle& f1,
                                  const DistributionHandle& f2) {
  const double lo = std::min(support_lo_for(f1), support_lo_for(f2));
  const double hi = std::max(support_hi_for(f1), support_hi_for(f2));
  auto gap = [&f1, &f2](double x) { return std::fabs(f1.cdf(x) - f2.cdf(x)); };

  constexpr int kGrid = 4096;
  std::vector<double> g(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i)
    g[i] = gap(lo + (hi - lo) * i / static_cast<double>(kGrid));

  // Refine around the five best grid points.
  std::vector<int> idx(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) idx[i] = i;
  std::partial_sort(idx.begin(), idx.begin() + 5, idx.end(),
                    [&g](int a, int b) { return g[a] > g[b]; });
  double best = 0.0;
  const double h = (hi - lo) / kGrid;
  for (int t = 0; t < 5; ++t) {
    const int i = idx[t];
    const double a = lo + h * std::max(i - 1, 0);
    const double b = lo + h * std::min(i + 1, kGrid);
    best = std::max(best, golden_maximize(gap, a, b, 1e-12 * (hi - lo)));
  }
  DistanceEstimate est;
  est.value = best;
  est.error_bound = 2.0 * kTailMass + 1e-10;
  est.method = "ks-exact-grid";
  return est;
}

DistanceEstimate kolmogorov_empirical(
    std::span<const double> sorted_sample,
    const std::function<double(double)>& cdf) {
  const std::size_t n = sorted_sample.size();
  if (n == 0)
    throw std::invalid_argument("kolmogorov_empirical: empty sample");
  double sup = 0.0;
  const double nd = static_cast<double>(n);
#pragma omp parallel for reduction(max : sup) schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    const double F = cdf(sorted_sample[i]);
    const double up = (i + 1) / nd - F;
    const double dn = F - i / nd;
    sup = std::max({sup, up, dn});
  }
  return {sup, dkw_radius(n), "ks-empirical"};
}

DistanceEstimate wasserstein1_cdf(const DistributionHandle& f1,
                                  const DistributionHandle& f2) {
  const double lo = std::min(support_lo_for(f1), support_lo_for(f2));
  const double hi = std::max(support_hi_for(f1), support_hi_for(f2));
  auto gap = [&f1, &f2](double x) { return std::fabs(f1.cdf(x) - f2.cdf(x)); };
  const QuadResult q = integrate(gap, lo, hi, 1e-10, 1e-10, 20000);
  DistanceEstimate est;
  est.value = q.value;
  // Tail remainder: both laws keep at most kTailMass beyond the truncated
  // support; with unit-scale second moments this contributes O(sqrt(mass)).
  double tail = 0.0;
  for (const DistributionHandle* h : {&f1, &f2}) {
    if (h->has_raw_moment())
      tail += std::sqrt(h->raw_moment(2) * kTailMass);
    else
      tail += std::sqrt(kTailMass);
  }
  est.error_bound = q.error + tail;
  est.method = "w1-cdf-quadrature";
  return est;
}

DistanceEstimate wasserstein1_sample(std::span<const double> sorted_sample,
                                     const DistributionHandle& f) {
  const std::size_t n = sorted_sample.size();
  if (n == 0)
    throw std::invalid_argument("wasserstein1_sample: empty sample");
  const double nd = static_cast<double>(n);

  // Compress ties: values v_j with empirical cdf level q_j to their right.
  std::vector<double> v;
  std::vector<double> level;
  v.reserve(1024);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && sorted_sample[j] == sorted_sample[i]) ++j;
    v.push_back(sorted_sample[i]);
    level.push_back(j / nd);
    i = j;
  }
  const std::size_t m = v.size();

  double err = 0.0;
  std::vector<double> pieces(m > 1 ? m - 1 : 0);
  const std::int64_t mm = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static) reduction(+ : err)
  for (std::int64_t j = 0; j < mm - 1; ++j) {
    const double q = level[j];
    const double a = v[j], b = v[j + 1];
    double c = f.quantile(q);
    c = std::min(std::max(c, a), b);
    auto below = [&f, q](double x) { return q - f.cdf(x); };
    auto above = [&f, q](double x) { return f.cdf(x) - q; };
    double e1 = 0.0, e2 = 0.0;
    const double left = c > a ? gk15(below, a, c, &e1) : 0.0;
    const double right = b > c ? gk15(above, c, b, &e2) : 0.0;
    pieces[j] = std::fabs(left) + std::fabs(right);
    err += e1 + e2;
  }
  double value = pairwise_sum(pieces);

  // Tails where the empirical cdf is flat 0 or 1.
  const double lo = std::min(support_lo_for(f), v.front());
  const double hi = std::max(support_hi_for(f), v.back());
  if (v.front() > lo) {
    const QuadResult ql =
        integrate([&f](double x) { return f.cdf(x); }, lo, v.front(), 1e-11);
    value += ql.value;
    err += ql.error;
  }
  if (v.back() < hi) {
    const QuadResult qr = integrate(
        [&f](double x) { return 1.0 - f.cdf(x); }, v.back(), hi, 1e-11);
    value += qr.value;
    err += qr.error;
  }
  if (f.has_raw_moment()) err += 2.0 * std::sqrt(f.raw_moment(2) * kTailMass);

  // Monte Carlo error: E d_W(F_n, F) <= int sqrt(F(1-F)) dx / sqrt(n);
  // triple it for a high-probability allowance.
  const QuadResult j = integrate(
      [&f](double x) {
        const double F = f.cdf(x);
        return std::sqrt(std::max(F * (1.0 - F), 0.0));
      },
      lo, hi, 1e-7, 1e-7, 20000);
  const double mc = 3.0 * j.value / std::sqrt(nd);

  DistanceEstimate est;
  est.value = value;
  est.error_bound = err + mc;
  est.method = "w1-empirical";
  return est;
}

double d2_lower_bound_cf(const CharacteristicFunction& phi1,
                         const CharacteristicFunction& phi2,
                         std::span<const double> omegas) {
  double best = 0.0;
  for (double w : omegas) {
    if (w == 0.0)
      throw std::invalid_argument("d2_lower_bound_cf: omega must be nonzero");
    const std::complex<double> d = phi1(w) - phi2(w);
    best = std::max(
        best, std::max(std::fabs(d.real()), std::fabs(d.imag())) / (w * w));
  }
  return best;
}

double d12_lower_bound_cf(const CharacteristicFunction& phi1,
                          const CharacteristicFunction& phi2,
                          std::span<const double> omegas) {
  double best = 0.0;
  for (double w : omegas) {
    if (w < 1.0) continue;  // ||h'|| = 1/omega must stay <= 1
    const std::complex<double> d = phi1(w) - phi2(w);
    best = std::max(
        best, std::max(std::fabs(d.real()), std::fabs(d.imag())) / (w * w));
  }
  return best;
}

std::complex<double> geometric_sum_cf(const SummandSpec& spec, double p,
                                      double t) {
  const std::complex<double> z = spec.cf(std::sqrt(p) * t);
  return p * z / (1.0 - (1.0 - p) * z);
}

std::complex<double> laplace_cf(double b, double t) {
  return {1.0 / (1.0 + b * b * t * t), 0.0};
}

ConcentrationCheck concentration_check(std::span<const double> sorted_sample,
                                       const LaplaceParams& laplace,
                                       double alpha, double beta) {
  if (alpha > beta)
    throw std::invalid_argument("concentration_check: alpha <= beta required");
  const std::size_t n = sorted_sample.size();
  const auto lo =
      std::lower_bound(sorted_sample.begin(), sorted_sample.end(), alpha);
  const auto hi =
      std::upper_bound(sorted_sample.begin(), sorted_sample.end(), beta);
  const double prob =
      static_cast<double>(hi - lo) / static_cast<double>(n);
  const DistributionHandle z = laplace_handle(laplace);
  const DistanceEstimate dk = kolmogorov_empirical(sorted_sample, z.cdf);
  ConcentrationCheck out;
  out.probability = prob;
  out.rhs = (beta - alpha) / (2.0 * laplace.scale) +
            2.0 * (dk.value + dk.error_bound) + dkw_radius(n);
  out.pass = prob <= out.rhs;
  return out;
}

ProductMetricCheck product_metric_check(const DistributionHandle& y1,
                                        const DistributionHandle& y2,
                                        const DistributionHandle& z1,
                                        const DistributionHandle& z2,
                                        ProductMetric metric, std::size_t n,
                                        std::uint64_t seed) {
  std::vector<double> p1(n), p2(n);
  const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < nn; ++i) {
    SplitMix64 rng = substream(seed, static_cast<std::uint64_t>(i));
    p1[i] = y1.sampler(rng) * z1.sampler(rng);
    p2[i] = y2.sampler(rng) * z2.sampler(rng);
  }
  std::sort(p1.begin(), p1.end());
  std::sort(p2.begin(), p2.end());

  ProductMetricCheck out;
  if (metric == ProductMetric::kolmogorov) {
    // Two-sample sup statistic by merging the order statistics.
    double sup = 0.0;
    std::size_t i = 0, j = 0;
    while (i < n && j < n) {
      if (p1[i] <= p2[j])
        ++i;
      else
        ++j;
      sup = std::max(sup, std::fabs(static_cast<double>(i) - j) /
                              static_cast<double>(n));
    }
    out.lhs = sup;
    out.lhs_error = 2.0 * dkw_radius(n);
    out.rhs = kolmogorov_exact(y1, y2).value + kolmogorov_exact(z1, z2).value;
  } else {
    // Quantile coupling of the two samples gives their exact W1 distance.
    std::vector<double> diffs(n);
    for (std::size_t i = 0; i < n; ++i) diffs[i] = std::fabs(p1[i] - p2[i]);
    out.lhs = pairwise_sum(diffs) / static_cast<double>(n);
    double scale = 1.0;
    if (y1.has_raw_moment() && z1.has_raw_moment())
      scale = std::sqrt(y1.raw_moment(2) * z1.raw_moment(2));
    out.lhs_error = 6.0 * scale / std::sqrt(static_cast<double>(n));
    if (!z1.has_abs_moment() || !y2.has_abs_moment())
      throw std::invalid_argument(
          "product_metric_check: first absolute moments required");
    out.rhs = z1.abs_moment(1) * wasserstein1_cdf(y1, y2).value +
              y2.abs_moment(1) * wasserstein1_cdf(z1, z2).value;
  }
  out.pass = out.lhs - out.lhs_error <= out.rhs;
  return out;
}

}  // namespace stein
