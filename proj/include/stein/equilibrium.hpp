#pragma once

#include <cstdint>
#include <vector>

#include "stein/distributions.hpp"

namespace stein {

// Law of X^L defined by E f(X) - f(0) = b^2 E f''(X^L) with b^2 = E[X^2]/2.
// Its density is m(x)/b^2 where m(x) = E(X-x)^+ for x >= 0 and
// m(x) = E(x-X)^+ for x < 0, i.e. tail integrals of the base cdf; that form
// is validated (not assumed) by the characterization property tests.
class CenteredEquilibrium {
 public:
  explicit CenteredEquilibrium(const SummandSpec& spec);

  double density(double x) const;  // m(x) / b^2, zero outside the support
  // Adaptive-quadrature cdf accumulated over a cached panel grid.
  double cdf(double x) const;
  // Bisection on cdf to absolute tolerance 1e-10.
  double quantile(double u) const;
  // Interpolated inverse used by the sampler (exact for discrete bases,
  // ~1e-7 for continuous ones; plenty below Monte Carlo resolution).
  double quantile_fast(double u) const;
  double sample(SplitMix64& rng) const;

  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  double half_second_moment() const { return b2_; }
  double total_mass() const { return total_; }
  const std::vector<double>& kinks() const { return kinks_; }

 private:
  double m_value(double x) const;
  std::size_t locate(double x) const;

  std::function<double(double)> base_cdf_;
  std::vector<Atom> atoms_;
  bool discrete_ = false;
  double b2_ = 0.0;
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<double> kinks_;
  std::vector<double> grid_;  // panel boundaries, kink-aligned
  std::vector<double> mgrid_;
  std::vector<double> dens_;  // density at grid points
  std::vector<double> cum_;   // cdf at grid points
  double total_ = 1.0;
};

// Moment identities E[(X^L)^r] = E[X^{r+2}] / ((r+1)(r+2) b^2) and the
// absolute-moment analogue.
double equilibrium_moment(const SummandSpec& spec, int r);
double equilibrium_abs_moment(const SummandSpec& spec, int r);

// sup over u of |F_X^{-1}(u) - F_{X^L}^{-1}(u)| on dyadic grids refined from
// 2^10 to 2^20 points; declared converged when successive sups move by less
// than 1e-4. Returns +infinity when the gap keeps growing at the grid
// extremes of an unbounded-support law.
double quantile_coupling_sup(const SummandSpec& spec);

struct CouplingSample {
  std::vector<double> w;      // S = sqrt(p) * sum_{i=1}^N X_i
  std::vector<double> w_eq;   // S^L, sharing X_1..X_{N-1}
  std::vector<double> delta;  // w - w_eq = sqrt(p) (X_N - X_N^L)
};

// Coupled draws of (S, S^L) for i.i.d. summands: X_N^L is drawn from the
// centered equilibrium law, independent of N and of all X_i. OpenMP-parallel
// over replications with per-replication substreams, so output is
// independent of the thread count.
CouplingSample sample_coupled_geometric(const SummandSpec& spec, double p,
                                        std::size_t count, std::uint64_t seed);

// Variant recording the geometric count N and the equilibrium draw X_N^L of
// each replication (needed by the conditional-mean statistics).
CouplingSample sample_coupled_geometric_with_n(const SummandSpec& spec,
                                               double p, std::size_t count,
                                               std::uint64_t seed,
                                               std::vector<std::int64_t>& n_out,
                                               std::vector<double>& x_eq_out);

namespace serial {
// Reference implementation: identical output, no threading.
CouplingSample sample_coupled_geometric(const SummandSpec& spec, double p,
                                        std::size_t count, std::uint64_t seed);
}  // namespace serial

}  // namespace stein
