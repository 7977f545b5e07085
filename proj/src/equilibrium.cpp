#include "stein/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stein/quadrature.hpp"

namespace stein {

namespace {

constexpr double kTailMass = 1e-16;
constexpr std::size_t kCells = 8192;

double truncated_lo(const DistributionHandle& h) {
  if (std::isfinite(h.support_lo)) return h.support_lo;
  return h.quantile(kTailMass);
}

double truncated_hi(const DistributionHandle& h) {
  if (std::isfinite(h.support_hi)) return h.support_hi;
  return h.quantile(1.0 - kTailMass);
}

}  // namespace

CenteredEquilibrium::CenteredEquilibrium(const SummandSpec& spec) {
  if (!(spec.sigma2 > 0.0))
    throw std::invalid_argument("CenteredEquilibrium: sigma2 must be positive");
  if (!spec.handle.cdf)
    throw std::invalid_argument("CenteredEquilibrium: base law lacks a cdf");
  base_cdf_ = spec.handle.cdf;
  atoms_ = spec.atoms;
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.x < b.x; });
  discrete_ = !atoms_.empty();
  b2_ = 0.5 * spec.sigma2;

  if (discrete_) {
    lo_ = atoms_.front().x;
    hi_ = atoms_.back().x;
  } else {
    lo_ = truncated_lo(spec.handle);
    hi_ = truncated_hi(spec.handle);
  }
  if (!(lo_ < 0.0) || !(hi_ > 0.0))
    throw std::invalid_argument(
        "CenteredEquilibrium: a mean-zero law must straddle 0");

  kinks_.push_back(0.0);
  for (const Atom& a : atoms_)
    if (a.x > lo_ && a.x < hi_) kinks_.push_back(a.x);
  std::sort(kinks_.begin(), kinks_.end());

  // Panel boundaries: kink-aligned, roughly uniform otherwise.
  std::vector<double> seg{lo_};
  for (double k : kinks_)
    if (k > lo_ && k < hi_) seg.push_back(k);
  seg.push_back(hi_);
  const double width = hi_ - lo_;
  for (std::size_t s = 0; s + 1 < seg.size(); ++s) {
    const double a = seg[s], b = seg[s + 1];
    const auto cells = std::max<std::size_t>(
        16, static_cast<std::size_t>(kCells * (b - a) / width));
    for (std::size_t i = 0; i < cells; ++i)
      grid_.push_back(a + (b - a) * static_cast<double>(i) /
                              static_cast<double>(cells));
  }
  grid_.push_back(hi_);

  const std::size_t n = grid_.size();
  mgrid_.assign(n, 0.0);
  if (discrete_) {
    for (std::size_t j = 0; j < n; ++j) mgrid_[j] = m_value(grid_[j]);
  } else {
    // March the tail integrals inward from each end: m' = -(1-F) above 0,
    // m' = F below 0, with m vanishing at the truncated support edges.
    const std::size_t z =
        std::lower_bound(grid_.begin(), grid_.end(), 0.0) - grid_.begin();
    auto upper = [this](double t) { return 1.0 - base_cdf_(t); };
    mgrid_[n - 1] = 0.0;
    for (std::size_t j = n - 1; j > z; --j)
      mgrid_[j - 1] = mgrid_[j] + gk15(upper, grid_[j - 1], grid_[j]);
    mgrid_[0] = 0.0;
    for (std::size_t j = 0; j < z; ++j)
      mgrid_[j + 1] = mgrid_[j] + gk15(base_cdf_, grid_[j], grid_[j + 1]);
  }

  dens_.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    dens_[j] = (discrete_ ? m_value(grid_[j]) : mgrid_[j]) / b2_;

  cum_.assign(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    auto dens = [this](double t) { return density(t); };
    cum_[j + 1] = cum_[j] + gk15(dens, grid_[j], grid_[j + 1]);
  }
  total_ = cum_[n - 1];
}

double CenteredEquilibrium::m_value(double x) const {
  if (discrete_) {
    double m = 0.0;
    if (x >= 0.0) {
      for (const Atom& a : atoms_)
        if (a.x > x) m += a.p * (a.x - x);
    } else {
      for (const Atom& a : atoms_)
        if (a.x < x) m += a.p * (x - a.x);
    }
    return m;
  }
  const std::size_t j = locate(x);
  if (x >= 0.0) {
    auto upper = [this](double t) { return 1.0 - base_cdf_(t); };
    return mgrid_[j + 1] + gk15(upper, x, grid_[j + 1]);
  }
  return mgrid_[j] + gk15(base_cdf_, grid_[j], x);
}

std::size_t CenteredEquilibrium::locate(double x) const {
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  std::size_t j = static_cast<std::size_t>(it - grid_.begin());
  if (j == 0) return 0;
  if (j >= grid_.size()) return grid_.size() - 2;
  return j - 1;
}

double CenteredEquilibrium::density(double x) const {
  if (x <= lo_ || x >= hi_) return 0.0;
  return m_value(x) / b2_;
}

double CenteredEquilibrium::cdf(double x) const {
  if (x <= lo_) return 0.0;
  if (x >= hi_) return total_;
  const std::size_t j = locate(x);
  auto dens = [this](double t) { return density(t); };
  return cum_[j] + gk15(dens, grid_[j], x);
}

double CenteredEquilibrium::quantile(double u) const {
  if (!(u > 0.0) || !(u < 1.0))
    throw std::domain_error("CenteredEquilibrium::quantile: u in (0,1)");
  const double target = u * total_;
  double lo = lo_, hi = hi_;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double CenteredEquilibrium::quantile_fast(double u) const {
  const double target = u * total_;
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
  std::size_t j = static_cast<std::size_t>(it - cum_.begin());
  if (j == 0) return lo_;
  if (j >= cum_.size()) return hi_;
  --j;
  const double t = target - cum_[j];
  const double w = grid_[j + 1] - grid_[j];
  const double da = dens_[j];
  const double db = dens_[j + 1];
  // Linear density within the cell (exact for discrete bases): invert the
  // resulting quadratic cdf piece.
  const double slope = (db - da) / w;
  double s;
  if (std::fabs(slope) * w < 1e-12 * std::max(da, 1e-300)) {
    s = da > 0.0 ? t / da : w * 0.5;
  } else {
    const double disc = da * da + 2.0 * slope * t;
    s = disc > 0.0 ? (std::sqrt(disc) - da) / slope : w * 0.5;
  }
  if (!(s >= 0.0)) s = 0.0;
  if (!(s <= w)) s = w;
  return grid_[j] + s;
}

double CenteredEquilibrium::sample(SplitMix64& rng) const {
  return quantile_fast(rng.next_unit());
}

double equilibrium_moment(const SummandSpec& spec, int r) {
  if (r < 0) throw std::invalid_argument("equilibrium_moment: r >= 0");
  if (!spec.handle.has_raw_moment())
    throw std::invalid_argument("equilibrium_moment: raw moments unavailable");
  const double b2 = 0.5 * spec.sigma2;
  return spec.handle.raw_moment(r + 2) / ((r + 1.0) * (r + 2.0) * b2);
}

double equilibrium_abs_moment(const SummandSpec& spec, int r) {
  if (r < 0) throw std::invalid_argument("equilibrium_abs_moment: r >= 0");
  if (!spec.abs_moment)
    throw std::invalid_argument(
        "equilibrium_abs_moment: absolute moments unavailable");
  const double b2 = 0.5 * spec.sigma2;
  return spec.abs_moment(r + 2) / ((r + 1.0) * (r + 2.0) * b2);
}

double quantile_coupling_sup(const SummandSpec& spec) {
  const CenteredEquilibrium eq(spec);
  const auto& qx = spec.handle.quantile;
  const bool unbounded = !std::isfinite(spec.handle.support_lo) ||
                         !std::isfinite(spec.handle.support_hi);
  double sup = 0.0;
  bool growing_at_edge = false;
  for (int level = 10; level <= 20; ++level) {
    const std::uint64_t n = 1ull << level;
    double level_sup = sup;
    std::uint64_t arg = 0;
    // Only the odd indices are new at this refinement level.
    const std::uint64_t start = level == 10 ? 1 : 1;
    const std::uint64_t step = level == 10 ? 1 : 2;
    for (std::uint64_t i = start; i < n; i += step) {
      const double u = static_cast<double>(i) / static_cast<double>(n);
      const double gap = std::fabs(qx(u) - eq.quantile_fast(u));
      if (gap > level_sup) {
        level_sup = gap;
        arg = i;
      }
    }
    const double improvement = level_sup - sup;
    growing_at_edge = improvement > 1e-4 && (arg <= 1 || arg >= n - 2);
    if (level > 10 && improvement < 1e-4) return level_sup;
    sup = level_sup;
  }
  if (unbounded && growing_at_edge)
    return std::numeric_limits<double>::infinity();
  return sup;
}

namespace {

struct CoupledDraw {
  double sum;   // sum of X_1..X_N
  double last;  // X_N
  double x_eq;  // X_N^L
  std::int64_t n;
};

CoupledDraw coupled_draw(const SummandSpec& spec, const CenteredEquilibrium& eq,
                         double p, SplitMix64& rng) {
  CoupledDraw d;
  d.n = geometric_sample(p, rng);
  d.sum = 0.0;
  d.last = 0.0;
  for (std::int64_t i = 0; i < d.n; ++i) {
    d.last = spec.handle.sampler(rng);
    d.sum += d.last;
  }
  d.x_eq = eq.sample(rng);
  return d;
}

CouplingSample coupled_sample_impl(const SummandSpec& spec, double p,
                                   std::size_t count, std::uint64_t seed,
                                   std::vector<std::int64_t>* n_out,
                                   std::vector<double>* x_eq_out,
                                   bool parallel) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("sample_coupled_geometric: p in (0,1)");
  const CenteredEquilibrium eq(spec);
  const double root_p = std::sqrt(p);
  CouplingSample out;
  out.w.resize(count);
  out.w_eq.resize(count);
  out.delta.resize(count);
  if (n_out) n_out->resize(count);
  if (x_eq_out) x_eq_out->resize(count);
  const std::int64_t nn = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t i = 0; i < nn; ++i) {
    SplitMix64 rng = substream(seed, static_cast<std::uint64_t>(i));
    const CoupledDraw d = coupled_draw(spec, eq, p, rng);
    out.w[i] = root_p * d.sum;
    out.w_eq[i] = root_p * (d.sum - d.last + d.x_eq);
    out.delta[i] = root_p * (d.last - d.x_eq);
    if (n_out) (*n_out)[i] = d.n;
    if (x_eq_out) (*x_eq_out)[i] = d.x_eq;
  }
  return out;
}

}  // namespace

CouplingSample sample_coupled_geometric(const SummandSpec& spec, double p,
                                        std::size_t count,
                                        std::uint64_t seed) {
  return coupled_sample_impl(spec, p, count, seed, nullptr, nullptr, true);
}

CouplingSample sample_coupled_geometric_with_n(const SummandSpec& spec,
                                               double p, std::size_t count,
                                               std::uint64_t seed,
                                               std::vector<std::int64_t>& n_out,
                                               std::vector<double>& x_eq_out) {
  return coupled_sample_impl(spec, p, count, seed, &n_out, &x_eq_out, true);
}

namespace serial {

CouplingSample sample_coupled_geometric(const SummandSpec& spec, double p,
                                        std::size_t count,
                                        std::uint64_t seed) {
  return coupled_sample_impl(spec, p, count, seed, nullptr, nullptr, false);
}

}  // namespace serial

}  // namespace stein
