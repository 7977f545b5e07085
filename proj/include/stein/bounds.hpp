#pragma once

#include <optional>
#include <span>
#include <vector>

#include "stein/distributions.hpp"
#include "stein/report.hpp"

namespace stein {

namespace constants {
// Printed constants, stored exactly as published; the *_exact() companions
// recompute them from their definitions so drift is detectable.
inline constexpr double kolmogorov_coupling = 11.56;
double kolmogorov_coupling_exact();  // (7/2 + sqrt(10)) + 3(1 + sqrt(2/5))
inline constexpr double berry_esseen = 0.5600;
inline constexpr double berry_esseen_iid = 0.4748;
inline constexpr double un_wasserstein = 11.49;
inline constexpr double tn_wasserstein_tail = 9.168;  // sqrt(2/pi) * 11.49
inline constexpr double rayleigh_xf = 2.325;
inline constexpr double rayleigh_fprime = 6.11;
inline constexpr double rayleigh_xfpp = 11.30;
inline constexpr double rayleigh_fprime_scaled = 8.6408;  // 6.11 * 2^{3/2} / 2
}  // namespace constants

// --- scalar bound formulas -------------------------------------------------

// Geometric sum vs Laplace(0, sigma/sqrt(2)).
double bound_wedfg(double sigma, double p, double coupling_sup);
double bound_rwrwa(double sigma, double p, double rho3);
double bound_taubound(double sigma, double p, int k, double rho_k,
                      double rho_k2);
double bound_on11(double sigma, double p, double fourth_moment, double rho3);
// The on11 bracket alone (bound = sigma^2 p * bracket); exposed so rate fits
// can remove the slowly varying factor analytically.
double bound_on11_bracket(double sigma, double p, double fourth_moment,
                          double rho3);

// General coupling bounds in terms of Delta = W - W^L, W ~ (0, 2b^2).
double bound_dfgh1(double b, double beta, double tail_prob);
double bound_dk76(double b, double beta, double tail_prob);
double bound_zezozr(double mean_abs_delta);
double bound_zezozr1(double mean_abs_delta);
double bound_zezozr2(double b, double mean_abs_delta);
double bound_ordern(double b, double mean_abs_cond_mean, double mean_delta_sq);
double bound_ghjk2(double b, int k, double mean_abs_delta_pow_k);

// Random sums with a general index variable.
double bound_wedf(double mu, double mean_abs_xdiff, double sup_sigma_rootnm);
double bound_wdv(double sigma, double mu, double coupling_sup, double support_c,
                 double index_gap_k);

// Deterministic sums vs the normal law.
double bound_berry_esseen(double sigma, int n, double sum_rho3, bool iid);
double bound_reinert_w(double sigma, int n, double sum_two_plus);
double bound_gaunt_d2(double sigma, int n, double sum_one_plus);

// U_n vs the Rayleigh mixing law.
double bound_pl12(int n);
double bound_pl14(int n);
double bound_eskol(int n);  // 0^0 := 1 at n = 2
double bound_esw(int n);    // requires n >= 3; +infinity at n = 2

// Comparison-only bounded-Wasserstein bound for the geometric sum.
double pike_ren_bw_bound(double sigma, double p, double rho3);

// --- report builders ---------------------------------------------------------

std::vector<BoundReport> thm1_bounds(const SummandSpec& spec, double p,
                                     double coupling_sup,
                                     std::optional<int> k = std::nullopt);
std::vector<BoundReport> thm2_bounds(const SummandSpec& spec, int n);
std::vector<BoundReport> thm2_bounds(std::span<const SummandSpec> specs, int n);

struct CouplingStatsInput {
  double mean_abs_delta = 0.0;
  double mean_delta_sq = 0.0;
  double tail_prob = 0.0;           // P(|Delta| > beta)
  double mean_abs_cond_mean = 0.0;  // E|E[Delta | W]|
  double mean_abs_delta_pow_k = 0.0;
};

std::vector<BoundReport> coupling_bounds(const CouplingStatsInput& stats,
                                         double b, double beta,
                                         std::optional<int> k = std::nullopt);

std::vector<BoundReport> random_sum_bounds(const SummandSpec& spec, double p,
                                           double coupling_sup,
                                           double support_c,
                                           double index_gap_k);

std::vector<BoundReport> clt_bounds(const SummandSpec& spec, int n,
                                    bool iid_constant = false);

std::vector<BoundReport> un_bounds(int n);

struct ConstantsAudit {
  double coupling_exact;        // 11.5597...
  double coupling_printed;      // 11.56
  double tail_recomputed;       // 0.7979 * 11.49
  double tail_printed;          // 9.168
  double rayleigh_recomputed;   // 6.11 * 2^{3/2} / 2
  double rayleigh_printed;      // 8.6408
};
ConstantsAudit audit_printed_constants();

}  // namespace stein
