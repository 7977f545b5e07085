#include "stein/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "stein/specfun.hpp"

namespace stein {

namespace constants {

double kolmogorov_coupling_exact() {
  return 3.5 + std::sqrt(10.0) + 3.0 * (1.0 + std::sqrt(0.4));
}

}  // namespace constants

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;
constexpr double kSqrtPi = 1.7724538509055160272981674833411;

double seven_half_plus_root10() { return 3.5 + std::sqrt(10.0); }

}  // namespace

double bound_wedfg(double sigma, double p, double coupling_sup) {
  return kSqrt2 * seven_half_plus_root10() * std::sqrt(p) / sigma *
         coupling_sup;
}

double bound_rwrwa(double sigma, double p, double rho3) {
  return 2.0 * sigma * std::sqrt(p) *
         (1.0 + rho3 / (3.0 * sigma * sigma * sigma));
}

double bound_taubound(double sigma, double p, int k, double rho_k,
                      double rho_k2) {
  if (k < 1) throw std::invalid_argument("bound_taubound: k >= 1 required");
  const double kd = k;
  const double moment = rho_k / std::pow(sigma, kd) +
                        2.0 * rho_k2 /
                            ((kd + 1.0) * (kd + 2.0) * std::pow(sigma, kd + 2.0));
  return constants::kolmogorov_coupling *
         std::pow(2.0, (kd - 1.0) / (kd + 1.0)) *
         std::pow(2.0 * p, 0.5 * kd / (kd + 1.0)) *
         std::pow(moment, 1.0 / (kd + 1.0));
}

double bound_on11_bracket(double sigma, double p, double fourth_moment,
                          double rho3) {
  const double s2 = sigma * sigma;
  return (2.0 - p) / (1.0 - p) + fourth_moment / (6.0 * s2 * s2) +
         std::sqrt(p) * std::log(1.0 / p) / (kSqrt2 * (1.0 - p)) *
             (2.0 + rho3 / (sigma * s2));
}

double bound_on11(double sigma, double p, double fourth_moment, double rho3) {
  return sigma * sigma * p * bound_on11_bracket(sigma, p, fourth_moment, rho3);
}

double bound_dfgh1(double b, double beta, double tail_prob) {
  return seven_half_plus_root10() * beta / b +
         3.0 * (1.0 + std::sqrt(0.4)) * tail_prob;
}

double bound_dk76(double b, double beta, double tail_prob) {
  return beta / b + 2.0 * tail_prob;
}

double bound_zezozr(double mean_abs_delta) { return 2.0 * mean_abs_delta; }

double bound_zezozr1(double mean_abs_delta) { return mean_abs_delta; }

double bound_zezozr2(double b, double mean_abs_delta) {
  return mean_abs_delta / b;
}

double bound_ordern(double b, double mean_abs_cond_mean,
                    double mean_delta_sq) {
  return b * mean_abs_cond_mean + mean_delta_sq;
}

double bound_ghjk2(double b, int k, double mean_abs_delta_pow_k) {
  if (k < 1) throw std::invalid_argument("bound_ghjk2: k >= 1 required");
  return constants::kolmogorov_coupling *
         std::pow(mean_abs_delta_pow_k / std::pow(b, k), 1.0 / (k + 1.0));
}

double bound_wedf(double mu, double mean_abs_xdiff, double sup_sigma_rootnm) {
  return 2.0 / std::sqrt(mu) * (mean_abs_xdiff + sup_sigma_rootnm);
}

double bound_wdv(double sigma, double mu, double coupling_sup,
                 double support_c, double index_gap_k) {
  return kSqrt2 * seven_half_plus_root10() / (sigma * std::sqrt(mu)) *
         (coupling_sup + support_c * index_gap_k);
}

double bound_berry_esseen(double sigma, int n, double sum_rho3, bool iid) {
  const double c0 = iid ? constants::berry_esseen_iid : constants::berry_esseen;
  return c0 * sum_rho3 /
         (sigma * sigma * sigma * std::pow(static_cast<double>(n), 1.5));
}

double bound_reinert_w(double sigma, int n, double sum_two_plus) {
  return sigma * sum_two_plus / std::pow(static_cast<double>(n), 1.5);
}

double bound_gaunt_d2(double sigma, int n, double sum_one_plus) {
  const double nd = n;
  return sigma * sigma * sum_one_plus / (nd * nd);
}

double bound_pl12(int n) {
  if (n < 2) throw std::invalid_argument("bound_pl12: n >= 2 required");
  return 2.0 / n;
}

double bound_pl14(int n) {
  if (n < 2) throw std::invalid_argument("bound_pl14: n >= 2 required");
  return constants::un_wasserstein / n;
}

double bound_eskol(int n) {
  if (n < 2) throw std::invalid_argument("bound_eskol: n >= 2 required");
  const double nd = n;
  const double pw = n == 2 ? 1.0  // 0^0 := 1
                           : std::exp((nd - 2.0) * std::log1p(-2.0 / nd));
  return (1.0 + 2.0 * pw) / nd;
}

double bound_esw(int n) {
  if (n < 2) throw std::invalid_argument("bound_esw: n >= 2 required");
  if (n == 2) return std::numeric_limits<double>::infinity();
  const double nd = n;
  // Scale-safe form: the printed (n-2)^n n (...) / n^n ratio is evaluated as
  // n (...) ((n-2)/n)^n so nothing overflows for large n.
  const double lead =
      -kSqrtPi / (4.0 * std::sqrt(nd)) * gamma_ratio(nd, nd + 0.5);
  const double ratio_pow = std::exp(nd * std::log1p(-2.0 / nd));
  const double inner =
      nd * (40.0 + 11.0 * (nd - 4.0) * nd) * ratio_pow +
      std::pow(nd - 2.0, 3.0) *
          hyp2f1_terminating(-0.5, 3.0 - nd, 0.5, 2.0 / nd);
  const double denom =
      (nd - 2.0) * (nd - 2.0) * (2.0 * nd - 5.0) * (2.0 * nd - 3.0) *
      (2.0 * nd - 1.0);
  return lead + 2.0 * kSqrt2 * (nd - 1.0) * inner / denom;
}

double pike_ren_bw_bound(double sigma, double p, double rho3) {
  return sigma * std::sqrt(p) * (1.0 + 2.0 * kSqrt2 / sigma) *
         (1.0 + rho3 / (3.0 * sigma * sigma * sigma));
}

namespace {

BoundReport make_report(const std::string& name, nlohmann::json inputs,
                        double bound) {
  BoundReport r;
  r.name = name;
  r.inputs = std::move(inputs);
  r.bound = bound;
  return r;
}

}  // namespace

std::vector<BoundReport> thm1_bounds(const SummandSpec& spec, double p,
                                     double coupling_sup,
                                     std::optional<int> k) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("thm1_bounds: p must lie in (0,1)");
  const double sigma = spec.sigma();
  std::vector<BoundReport> out;
  out.push_back(make_report(
      "wedfg", {{"summand", spec.name}, {"p", p}, {"Q", coupling_sup}},
      bound_wedfg(sigma, p, coupling_sup)));
  if (spec.abs_moment) {
    const double rho3 = spec.abs_moment(3);
    out.push_back(make_report("rwrwa",
                              {{"summand", spec.name}, {"p", p}, {"rho3", rho3}},
                              bound_rwrwa(sigma, p, rho3)));
    if (k) {
      const double rho_k = spec.abs_moment(*k);
      const double rho_k2 = spec.abs_moment(*k + 2);
      out.push_back(make_report(
          "taubound", {{"summand", spec.name}, {"p", p}, {"k", *k}},
          bound_taubound(sigma, p, *k, rho_k, rho_k2)));
    }
    if (spec.third_moment == 0.0) {
      out.push_back(make_report(
          "on11", {{"summand", spec.name}, {"p", p}},
          bound_on11(sigma, p, spec.fourth_moment, rho3)));
    }
  } else if (k) {
    throw std::invalid_argument(
        "thm1_bounds: taubound needs absolute moments rho_k, rho_{k+2}");
  }
  return out;
}

std::vector<BoundReport> thm2_bounds(const SummandSpec& spec, int n) {
  std::vector<SummandSpec> specs(static_cast<std::size_t>(n), spec);
  return thm2_bounds(std::span<const SummandSpec>(specs), n);
}

std::vector<BoundReport> thm2_bounds(std::span<const SummandSpec> specs,
                                     int n) {
  if (n < 2) throw std::invalid_argument("thm2_bounds: n >= 2 required");
  if (specs.empty()) throw std::invalid_argument("thm2_bounds: no summands");
  const double sigma = specs.front().sigma();
  const double s2 = sigma * sigma;
  double sum_rho3 = 0.0, sum_two_plus = 0.0, sum_one_plus = 0.0;
  bool third_zero = true;
  for (const SummandSpec& s : specs) {
    if (std::fabs(s.sigma2 - specs.front().sigma2) > 1e-12 * s.sigma2)
      throw std::invalid_argument(
          "thm2_bounds: summands must share a common variance");
    if (!s.abs_moment)
      throw std::invalid_argument("thm2_bounds: E|X|^3 required");
    const double rho3 = s.abs_moment(3);
    sum_rho3 += rho3;
    sum_two_plus += 2.0 + rho3 / (sigma * s2);
    sum_one_plus += 1.0 + s.fourth_moment / (3.0 * s2 * s2);
    third_zero = third_zero && s.third_moment == 0.0;
  }
  const double nd = n;
  std::vector<BoundReport> out;
  out.push_back(make_report(
      "thm2-dk", {{"n", n}},
      bound_berry_esseen(sigma, n, sum_rho3, false) + bound_eskol(n)));
  out.push_back(make_report(
      "thm2-dw", {{"n", n}},
      2.0 * kSqrt2 / 3.0 * bound_reinert_w(sigma, n, sum_two_plus) +
          constants::tn_wasserstein_tail * sigma / nd));
  if (third_zero) {
    out.push_back(make_report(
        "thm2-d12", {{"n", n}},
        bound_gaunt_d2(sigma, n, sum_one_plus) +
            constants::tn_wasserstein_tail * sigma / nd));
  }
  return out;
}

std::vector<BoundReport> coupling_bounds(const CouplingStatsInput& stats,
                                         double b, double beta,
                                         std::optional<int> k) {
  if (!(beta > 0.0))
    throw std::invalid_argument("coupling_bounds: beta must be positive");
  std::vector<BoundReport> out;
  const nlohmann::json in = {{"b", b}, {"beta", beta}};
  out.push_back(
      make_report("dfgh1", in, bound_dfgh1(b, beta, stats.tail_prob)));
  out.push_back(make_report("dk76", in, bound_dk76(b, beta, stats.tail_prob)));
  out.push_back(make_report("zezozr", in, bound_zezozr(stats.mean_abs_delta)));
  out.push_back(
      make_report("zezozr1", in, bound_zezozr1(stats.mean_abs_delta)));
  out.push_back(
      make_report("zezozr2", in, bound_zezozr2(b, stats.mean_abs_delta)));
  out.push_back(make_report(
      "ordern", in,
      bound_ordern(b, stats.mean_abs_cond_mean, stats.mean_delta_sq)));
  if (k) {
    out.push_back(make_report(
        "ghjk2", {{"b", b}, {"k", *k}},
        bound_ghjk2(b, *k, stats.mean_abs_delta_pow_k)));
  }
  return out;
}

std::vector<BoundReport> random_sum_bounds(const SummandSpec& spec, double p,
                                           double coupling_sup,
                                           double support_c,
                                           double index_gap_k) {
  if (index_gap_k > 0.0 && !std::isfinite(support_c))
    throw std::invalid_argument(
        "random_sum_bounds: K > 0 requires bounded summands");
  const double sigma = spec.sigma();
  const double mu = 1.0 / p;  // geometric index: E N = 1/p
  // E|X_M - X_M^L| <= sigma + rho3 / (3 sigma^2)
  const double rho3 = spec.abs_moment ? spec.abs_moment(3)
                                      : std::numeric_limits<double>::quiet_NaN();
  const double mean_abs_xdiff = sigma + rho3 / (3.0 * spec.sigma2);
  std::vector<BoundReport> out;
  out.push_back(make_report("wedf", {{"p", p}},
                            bound_wedf(mu, mean_abs_xdiff, 0.0)));
  out.push_back(make_report(
      "wdv", {{"p", p}, {"C", support_c}, {"K", index_gap_k}},
      bound_wdv(sigma, mu, coupling_sup, support_c, index_gap_k)));
  return out;
}

std::vector<BoundReport> clt_bounds(const SummandSpec& spec, int n,
                                    bool iid_constant) {
  if (n < 1) throw std::invalid_argument("clt_bounds: n >= 1 required");
  if (!spec.abs_moment)
    throw std::invalid_argument("clt_bounds: E|X|^3 required");
  const double sigma = spec.sigma();
  const double s2 = sigma * sigma;
  const double rho3 = spec.abs_moment(3);
  std::vector<BoundReport> out;
  out.push_back(make_report(
      "berry-esseen", {{"n", n}, {"iid", iid_constant}},
      bound_berry_esseen(sigma, n, n * rho3, iid_constant)));
  out.push_back(make_report(
      "minrev", {{"n", n}},
      bound_reinert_w(sigma, n, n * (2.0 + rho3 / (sigma * s2)))));
  if (spec.third_moment == 0.0) {
    out.push_back(make_report(
        "thmap2d", {{"n", n}},
        bound_gaunt_d2(sigma, n,
                       n * (1.0 + spec.fourth_moment / (3.0 * s2 * s2)))));
  }
  return out;
}

std::vector<BoundReport> un_bounds(int n) {
  if (n < 2) throw std::invalid_argument("un_bounds: n >= 2 required");
  std::vector<BoundReport> out;
  out.push_back(make_report("pl12", {{"n", n}}, bound_pl12(n)));
  out.push_back(make_report("pl14", {{"n", n}}, bound_pl14(n)));
  out.push_back(make_report("eskol", {{"n", n}}, bound_eskol(n)));
  out.push_back(make_report("esw", {{"n", n}}, bound_esw(n)));
  return out;
}

ConstantsAudit audit_printed_constants() {
  ConstantsAudit a;
  a.coupling_exact = constants::kolmogorov_coupling_exact();
  a.coupling_printed = constants::kolmogorov_coupling;
  a.tail_recomputed = 0.7979 * constants::un_wasserstein;
  a.tail_printed = constants::tn_wasserstein_tail;
  a.rayleigh_recomputed =
      constants::rayleigh_fprime * std::pow(2.0, 1.5) / 2.0;
  a.rayleigh_printed = constants::rayleigh_fprime_scaled;
  return a;
}

}  // namespace stein
