#include "stein/distributions.hpp"

#include <cmath>
#include <stdexcept>

#include "stein/specfun.hpp"

namespace stein {

namespace {

constexpr double kSqrtPi = 1.7724538509055160272981674833411;

double factorial(int r) {
  double f = 1.0;
  for (int i = 2; i <= r; ++i) f *= i;
  return f;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1.0);
  return b;
}

}  // namespace

double SummandSpec::sigma() const { return std::sqrt(sigma2); }

DistributionHandle laplace_handle(const LaplaceParams& params) {
  if (!(params.scale > 0.0))
    throw std::invalid_argument("laplace_handle: scale must be positive");
  const double a = params.location;
  const double b = params.scale;
  DistributionHandle h;
  h.name = "laplace";
  h.density = [a, b](double x) {
    return std::exp(-std::fabs(x - a) / b) / (2.0 * b);
  };
  h.cdf = [a, b](double x) {
    const double z = (x - a) / b;
    return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
  };
  h.quantile = [a, b](double u) {
    return u < 0.5 ? a + b * std::log(2.0 * u)
                   : a - b * std::log(2.0 * (1.0 - u));
  };
  auto quantile = h.quantile;
  h.sampler = [quantile](SplitMix64& rng) { return quantile(rng.next_unit()); };
  h.raw_moment = [a, b](int r) {
    // Central moments of Laplace(0,b): r! b^r for even r, 0 for odd.
    double sum = 0.0;
    for (int j = 0; j <= r; j += 2)
      sum += binomial(r, j) * std::pow(a, r - j) * factorial(j) * std::pow(b, j);
    return sum;
  };
  if (a == 0.0) {
    h.abs_moment = [b](int r) { return factorial(r) * std::pow(b, r); };
  }
  return h;
}

DistributionHandle normal_handle(double sigma) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("normal_handle: sigma must be positive");
  DistributionHandle h;
  h.name = "normal";
  const double s = sigma;
  h.density = [s](double x) {
    return std::exp(-0.5 * x * x / (s * s)) /
           (s * 2.5066282746310005024157652848);
  };
  h.cdf = [s](double x) { return normal_cdf(x / s); };
  h.quantile = [s](double u) { return s * normal_quantile(u); };
  auto quantile = h.quantile;
  h.sampler = [quantile](SplitMix64& rng) { return quantile(rng.next_unit()); };
  h.raw_moment = [s](int r) {
    if (r % 2 == 1) return 0.0;
    double dfact = 1.0;  // (r-1)!!
    for (int i = r - 1; i > 1; i -= 2) dfact *= i;
    return dfact * std::pow(s, r);
  };
  h.abs_moment = [s](int r) {
    // E|X|^r = sigma^r 2^{r/2} Gamma((r+1)/2) / sqrt(pi)
    return std::pow(s, r) * std::pow(2.0, 0.5 * r) *
           std::exp(log_gamma(0.5 * (r + 1.0))) / kSqrtPi;
  };
  return h;
}

DistributionHandle rayleigh_handle(double sigma) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("rayleigh_handle: sigma must be positive");
  const double s2 = sigma * sigma;
  DistributionHandle h;
  h.name = "rayleigh";
  h.support_lo = 0.0;
  h.density = [s2](double x) {
    return x <= 0.0 ? 0.0 : x / s2 * std::exp(-0.5 * x * x / s2);
  };
  h.cdf = [s2](double x) {
    return x <= 0.0 ? 0.0 : -std::expm1(-0.5 * x * x / s2);
  };
  h.quantile = [s2](double u) {
    return std::sqrt(-2.0 * s2 * std::log1p(-u));
  };
  auto quantile = h.quantile;
  h.sampler = [quantile](SplitMix64& rng) { return quantile(rng.next_unit()); };
  h.raw_moment = [sigma](int r) {
    // E X^r = sigma^r 2^{r/2} Gamma(1 + r/2)
    return std::pow(sigma, r) * std::pow(2.0, 0.5 * r) *
           std::exp(log_gamma(1.0 + 0.5 * r));
  };
  h.abs_moment = h.raw_moment;
  return h;
}

DistributionHandle chi_handle(double k) {
  if (!(k > 0.0))
    throw std::invalid_argument("chi_handle: k must be positive");
  const double log_norm = (0.5 * k - 1.0) * std::log(2.0) + log_gamma(0.5 * k);
  DistributionHandle h;
  h.name = "chi";
  h.support_lo = 0.0;
  h.density = [k, log_norm](double x) {
    if (x <= 0.0) return 0.0;
    return std::exp((k - 1.0) * std::log(x) - 0.5 * x * x - log_norm);
  };
  h.cdf = [k](double x) {
    return x <= 0.0 ? 0.0 : reg_gamma_p(0.5 * k, 0.5 * x * x);
  };
  auto cdf = h.cdf;
  auto density = h.density;
  h.quantile = [k, cdf, density](double u) {
    if (!(u > 0.0) || !(u < 1.0))
      throw std::domain_error("chi quantile: u must lie in (0,1)");
    // Wilson-Hilferty start for the chi-square quantile, then safeguarded
    // Newton on the chi cdf.
    const double z = normal_quantile(u);
    const double c = 2.0 / (9.0 * k);
    double q2 = k * std::pow(std::max(1.0 - c + z * std::sqrt(c), 0.1), 3.0);
    double x = std::sqrt(std::max(q2, 1e-12));
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 100; ++it) {
      const double e = cdf(x) - u;
      if (e > 0.0)
        hi = x;
      else
        lo = x;
      const double d = density(x);
      double step = d > 0.0 ? e / d : 0.0;
      double xn = x - step;
      if (!(xn > lo) || !(xn < hi))
        xn = std::isinf(hi) ? 2.0 * x : 0.5 * (lo + hi);
      if (std::fabs(xn - x) < 1e-13 * std::max(1.0, x)) return xn;
      x = xn;
    }
    return x;
  };
  auto quantile = h.quantile;
  h.sampler = [quantile](SplitMix64& rng) { return quantile(rng.next_unit()); };
  h.raw_moment = [k](int r) {
    return std::pow(2.0, 0.5 * r) *
           std::exp(log_gamma(0.5 * (k + r)) - log_gamma(0.5 * k));
  };
  h.abs_moment = h.raw_moment;
  return h;
}

DistributionHandle beta1m_handle(int m) {
  if (m < 1) throw std::invalid_argument("beta1m_handle: m must be >= 1");
  const double md = m;
  DistributionHandle h;
  h.name = "beta_1_m";
  h.support_lo = 0.0;
  h.support_hi = 1.0;
  h.density = [md](double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return md * std::exp((md - 1.0) * std::log1p(-x));
  };
  h.cdf = [md](double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return -std::expm1(md * std::log1p(-x));
  };
  h.quantile = [md](double u) { return -std::expm1(std::log1p(-u) / md); };
  auto quantile = h.quantile;
  h.sampler = [quantile](SplitMix64& rng) { return quantile(rng.next_unit()); };
  h.raw_moment = [md](int r) {
    // E B^r = m * B(r+1, m)
    return md * std::exp(log_beta(r + 1.0, md));
  };
  h.abs_moment = h.raw_moment;
  return h;
}

double scaled_beta_root_moment(int n, int r) {
  if (n < 2) throw std::invalid_argument("scaled_beta_root_moment: n >= 2");
  if (r < 0 || r > 4)
    throw std::invalid_argument("scaled_beta_root_moment: r must be 0..4");
  if (r == 0) return 1.0;
  if (r == 2) return 1.0;  // n * E Beta(1,n-1) exactly
  // E U_n^r = n^{r/2} Gamma(r/2 + 1) Gamma(n) / Gamma(n + r/2)
  const double half_r = 0.5 * r;
  return std::exp(half_r * std::log(static_cast<double>(n)) +
                  log_gamma(half_r + 1.0) + log_gamma(static_cast<double>(n)) -
                  log_gamma(n + half_r));
}

DistributionHandle scaled_beta_root_handle(int n) {
  if (n < 2) throw std::invalid_argument("scaled_beta_root_handle: n >= 2");
  const double nd = n;
  DistributionHandle h;
  h.name = "scaled_beta_root";
  h.support_lo = 0.0;
  h.support_hi = std::sqrt(nd);
  h.density = [nd](double u) {
    if (u <= 0.0 || u * u >= nd) return 0.0;
    return 2.0 * u * (nd - 1.0) / nd *
           std::exp((nd - 2.0) * std::log1p(-u * u / nd));
  };
  h.cdf = [nd](double u) {
    if (u <= 0.0) return 0.0;
    if (u * u >= nd) return 1.0;
    return -std::expm1((nd - 1.0) * std::log1p(-u * u / nd));
  };
  h.quantile = [nd](double v) {
    return std::sqrt(-nd * std::expm1(std::log1p(-v) / (nd - 1.0)));
  };
  auto quantile = h.quantile;
  h.sampler = [quantile](SplitMix64& rng) { return quantile(rng.next_unit()); };
  const int n_copy = n;
  h.raw_moment = [n_copy, nd](int r) {
    if (r <= 4) return scaled_beta_root_moment(n_copy, r);
    const double half_r = 0.5 * r;
    return std::exp(half_r * std::log(nd) + log_gamma(half_r + 1.0) +
                    log_gamma(nd) - log_gamma(nd + half_r));
  };
  h.abs_moment = h.raw_moment;
  return h;
}

std::int64_t geometric_sample(double p, SplitMix64& rng) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("geometric_sample: p must lie in (0,1)");
  const double u = rng.next_unit();
  const double n = std::ceil(std::log(u) / std::log1p(-p));
  return n < 1.0 ? 1 : static_cast<std::int64_t>(n);
}

double geometric_mean_inverse(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("geometric_mean_inverse: p must lie in (0,1)");
  return -p * std::log(p) / (1.0 - p);
}

SummandSpec rademacher_summand(double sigma) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("rademacher_summand: sigma must be positive");
  SummandSpec spec;
  spec.name = "rademacher";
  spec.params = {{"sigma", sigma}};
  spec.sigma2 = sigma * sigma;
  spec.third_moment = 0.0;
  spec.fourth_moment = std::pow(sigma, 4);
  spec.abs_moment = [sigma](int k) { return std::pow(sigma, k); };
  spec.atoms = {{-sigma, 0.5}, {sigma, 0.5}};
  spec.cf = [sigma](double t) {
    return std::complex<double>(std::cos(sigma * t), 0.0);
  };
  DistributionHandle h;
  h.name = "rademacher";
  h.support_lo = -sigma;
  h.support_hi = sigma;
  h.cdf = [sigma](double x) {
    if (x < -sigma) return 0.0;
    if (x < sigma) return 0.5;
    return 1.0;
  };
  h.quantile = [sigma](double u) { return u <= 0.5 ? -sigma : sigma; };
  h.sampler = [sigma](SplitMix64& rng) {
    return rng.next_unit() <= 0.5 ? -sigma : sigma;
  };
  h.raw_moment = [sigma](int r) {
    return r % 2 == 0 ? std::pow(sigma, r) : 0.0;
  };
  h.abs_moment = spec.abs_moment;
  spec.handle = std::move(h);
  return spec;
}

SummandSpec uniform_summand(double half_width) {
  if (!(half_width > 0.0))
    throw std::invalid_argument("uniform_summand: half_width must be positive");
  const double c = half_width;
  SummandSpec spec;
  spec.name = "uniform";
  spec.params = {{"half_width", c}};
  spec.sigma2 = c * c / 3.0;
  spec.third_moment = 0.0;
  spec.fourth_moment = std::pow(c, 4) / 5.0;
  spec.abs_moment = [c](int k) { return std::pow(c, k) / (k + 1.0); };
  spec.cf = [c](double t) {
    const double ct = c * t;
    const double v = std::fabs(ct) < 1e-8 ? 1.0 - ct * ct / 6.0
                                          : std::sin(ct) / ct;
    return std::complex<double>(v, 0.0);
  };
  DistributionHandle h;
  h.name = "uniform";
  h.support_lo = -c;
  h.support_hi = c;
  h.density = [c](double x) {
    return std::fabs(x) <= c ? 0.5 / c : 0.0;
  };
  h.cdf = [c](double x) {
    if (x <= -c) return 0.0;
    if (x >= c) return 1.0;
    return 0.5 * (x + c) / c;
  };
  h.quantile = [c](double u) { return -c + 2.0 * c * u; };
  auto quantile = h.quantile;
  h.sampler = [quantile](SplitMix64& rng) { return quantile(rng.next_unit()); };
  h.raw_moment = [c](int r) {
    return r % 2 == 0 ? std::pow(c, r) / (r + 1.0) : 0.0;
  };
  h.abs_moment = spec.abs_moment;
  spec.handle = std::move(h);
  return spec;
}

SummandSpec two_point_summand(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("two_point_summand: alpha, beta > 0 required");
  const double q = beta / (alpha + beta);  // mass at -alpha
  SummandSpec spec;
  spec.name = "two_point";
  spec.params = {{"alpha", alpha}, {"beta", beta}};
  spec.sigma2 = alpha * beta;
  spec.third_moment = alpha * beta * (beta - alpha);
  spec.fourth_moment = alpha * beta * (alpha * alpha - alpha * beta + beta * beta);
  spec.abs_moment = [alpha, beta, q](int k) {
    return q * std::pow(alpha, k) + (1.0 - q) * std::pow(beta, k);
  };
  spec.atoms = {{-alpha, q}, {beta, 1.0 - q}};
  spec.cf = [alpha, beta, q](double t) {
    return q * std::exp(std::complex<double>(0.0, -alpha * t)) +
           (1.0 - q) * std::exp(std::complex<double>(0.0, beta * t));
  };
  DistributionHandle h;
  h.name = "two_point";
  h.support_lo = -alpha;
  h.support_hi = beta;
  h.cdf = [alpha, beta, q](double x) {
    if (x < -alpha) return 0.0;
    if (x < beta) return q;
    return 1.0;
  };
  h.quantile = [alpha, beta, q](double u) { return u <= q ? -alpha : beta; };
  h.sampler = [alpha, beta, q](SplitMix64& rng) {
    return rng.next_unit() <= q ? -alpha : beta;
  };
  h.raw_moment = [alpha, beta, q](int r) {
    return q * std::pow(-alpha, r) + (1.0 - q) * std::pow(beta, r);
  };
  h.abs_moment = spec.abs_moment;
  spec.handle = std::move(h);
  return spec;
}

SummandSpec laplace_summand(double scale) {
  SummandSpec spec;
  spec.name = "laplace";
  spec.params = {{"scale", scale}};
  const double b = scale;
  spec.sigma2 = 2.0 * b * b;
  spec.third_moment = 0.0;
  spec.fourth_moment = 24.0 * std::pow(b, 4);
  spec.abs_moment = [b](int k) { return factorial(k) * std::pow(b, k); };
  spec.cf = [b](double t) {
    return std::complex<double>(1.0 / (1.0 + b * b * t * t), 0.0);
  };
  spec.handle = laplace_handle({0.0, b});
  return spec;
}

SummandSpec normal_summand(double sigma) {
  SummandSpec spec;
  spec.name = "normal";
  spec.params = {{"sigma", sigma}};
  spec.sigma2 = sigma * sigma;
  spec.third_moment = 0.0;
  spec.fourth_moment = 3.0 * std::pow(sigma, 4);
  spec.handle = normal_handle(sigma);
  spec.abs_moment = spec.handle.abs_moment;
  spec.cf = [sigma](double t) {
    return std::complex<double>(std::exp(-0.5 * sigma * sigma * t * t), 0.0);
  };
  return spec;
}

std::vector<SummandSpec> summand_library() {
  std::vector<SummandSpec> out;
  out.push_back(rademacher_summand(1.0));
  out.push_back(uniform_summand(std::sqrt(3.0)));
  out.push_back(two_point_summand(1.0, 2.0));
  out.push_back(laplace_summand(1.0));
  out.push_back(normal_summand(1.0));
  return out;
}

nlohmann::json summand_to_json(const SummandSpec& spec) {
  return {{"name", spec.name}, {"params", spec.params}};
}

SummandSpec summand_from_json(const nlohmann::json& j) {
  if (!j.contains("name"))
    throw std::invalid_argument("summand: missing field 'name'");
  const std::string name = j.at("name").get<std::string>();
  const nlohmann::json params =
      j.contains("params") ? j.at("params") : nlohmann::json::object();
  auto get = [&params](const char* key, double fallback) {
    return params.contains(key) ? params.at(key).get<double>() : fallback;
  };
  if (name == "rademacher") return rademacher_summand(get("sigma", 1.0));
  if (name == "uniform")
    return uniform_summand(get("half_width", std::sqrt(3.0)));
  if (name == "two_point")
    return two_point_summand(get("alpha", 1.0), get("beta", 2.0));
  if (name == "laplace") return laplace_summand(get("scale", 1.0));
  if (name == "normal") return normal_summand(get("sigma", 1.0));
  throw std::invalid_argument("summand: unknown name '" + name + "'");
}

}  // namespace stein
