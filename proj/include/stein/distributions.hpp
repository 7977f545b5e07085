#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "stein/rng.hpp"

namespace stein {

// Capability record for a one-dimensional law. cdf, quantile and sampler are
// always present; density and the moment accessors only where the law
// provides them (check the has_* flags before calling).
struct DistributionHandle {
  std::string name;
  std::function<double(double)> density;
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;  // u in (0,1), generalized inverse
  std::function<double(SplitMix64&)> sampler;
  std::function<double(int)> raw_moment;  // E X^r
  std::function<double(int)> abs_moment;  // E |X|^r
  double support_lo = -std::numeric_limits<double>::infinity();
  double support_hi = std::numeric_limits<double>::infinity();

  bool has_density() const { return static_cast<bool>(density); }
  bool has_raw_moment() const { return static_cast<bool>(raw_moment); }
  bool has_abs_moment() const { return static_cast<bool>(abs_moment); }
};

struct LaplaceParams {
  double location = 0.0;
  double scale = 1.0;  // > 0; variance is 2*scale^2, E|X-location| = scale
};

DistributionHandle laplace_handle(const LaplaceParams& params);
DistributionHandle normal_handle(double sigma);  // mean zero
DistributionHandle rayleigh_handle(double sigma);
DistributionHandle chi_handle(double k);
DistributionHandle beta1m_handle(int m);  // Beta(1, m)

// U_n = sqrt(n * Beta(1, n-1)); support (0, sqrt(n)),
// cdf(u) = 1 - (1 - u^2/n)^(n-1).
DistributionHandle scaled_beta_root_handle(int n);

// E[U_n^r] for r = 0..4, via the log-gamma route so large n cannot overflow.
// E[U_n^2] = 1 exactly.
double scaled_beta_root_moment(int n, int r);

// Geometric law on {1,2,...} with mean 1/p, sampled by one inversion:
// N = ceil(log(U)/log(1-p)).
std::int64_t geometric_sample(double p, SplitMix64& rng);
double geometric_mean_inverse(double p);  // E[1/N] = p log(1/p)/(1-p)

struct Atom {
  double x;
  double p;
};

// A mean-zero, finite-variance summand law with exact moment accessors.
struct SummandSpec {
  std::string name;
  double sigma2 = 1.0;         // E X^2
  double third_moment = 0.0;   // E X^3
  double fourth_moment = 1.0;  // E X^4
  std::function<double(int)> abs_moment;  // rho_k = E|X|^k
  DistributionHandle handle;
  std::vector<Atom> atoms;  // nonempty iff the law is discrete
  std::function<std::complex<double>(double)> cf;
  nlohmann::json params;

  double sigma() const;
};

SummandSpec rademacher_summand(double sigma);
SummandSpec uniform_summand(double half_width);
// Two-point law: mass beta/(alpha+beta) at -alpha, alpha/(alpha+beta) at
// +beta; mean zero by construction, variance alpha*beta.
SummandSpec two_point_summand(double alpha, double beta);
SummandSpec laplace_summand(double scale);
SummandSpec normal_summand(double sigma);

std::vector<SummandSpec> summand_library();

nlohmann::json summand_to_json(const SummandSpec& spec);
SummandSpec summand_from_json(const nlohmann::json& j);

}  // namespace stein
