#include "stein/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "stein/bounds.hpp"
#include "stein/equilibrium.hpp"
#include "stein/metrics.hpp"
#include "stein/parallel.hpp"
#include "stein/version.hpp"

namespace stein {

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  auto require = [&j](const char* field) {
    if (!j.contains(field))
      throw std::invalid_argument(std::string("config: missing field '") +
                                  field + "'");
  };
  require("summand");
  require("model");
  require("grid");
  c.summand = j.at("summand");
  summand_from_json(c.summand);  // validates eagerly
  c.model = j.at("model").get<std::string>();
  if (c.model != "geometric_sum" && c.model != "beta_normalised_sum")
    throw std::invalid_argument(
        "config: field 'model' must be 'geometric_sum' or "
        "'beta_normalised_sum'");
  c.grid = j.at("grid").get<std::vector<double>>();
  if (c.grid.empty())
    throw std::invalid_argument("config: field 'grid' must be nonempty");
  for (double g : c.grid) {
    if (c.model == "geometric_sum" && !(g > 0.0 && g < 1.0))
      throw std::invalid_argument(
          "config: field 'grid' entries must lie in (0,1) for geometric_sum");
    if (c.model == "beta_normalised_sum" &&
        (g < 2.0 || g != std::floor(g)))
      throw std::invalid_argument(
          "config: field 'grid' entries must be integers >= 2 for "
          "beta_normalised_sum");
  }
  c.seed = j.value("seed", std::uint64_t{1});
  c.replications = j.value("replications", std::size_t{1000000});
  if (c.replications < 10000)
    throw std::invalid_argument(
        "config: field 'replications' must be at least 10000");
  c.metrics = j.value("metrics", std::vector<std::string>{"K", "W"});
  for (const std::string& m : c.metrics)
    if (m != "K" && m != "W" && m != "cf-lower")
      throw std::invalid_argument(
          "config: field 'metrics' entries must be K, W or cf-lower");
  c.output_path = j.value("output_path", std::string{});
  return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  return {{"seed", c.seed},          {"replications", c.replications},
          {"summand", c.summand},    {"model", c.model},
          {"grid", c.grid},          {"metrics", c.metrics},
          {"output_path", c.output_path}};
}

namespace {

std::vector<double> geometric_sum_impl(const SummandSpec& spec, double p,
                                       std::size_t count, std::uint64_t seed,
                                       bool parallel) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("simulate_geometric_sum: p in (0,1)");
  std::vector<double> out(count);
  const double root_p = std::sqrt(p);
  const std::int64_t n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    SplitMix64 rng = substream(seed, static_cast<std::uint64_t>(i));
    const std::int64_t terms = geometric_sample(p, rng);
    double sum = 0.0;
    for (std::int64_t t = 0; t < terms; ++t) sum += spec.handle.sampler(rng);
    out[i] = root_p * sum;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> tn_impl(const SummandSpec& spec, int n, std::size_t count,
                            std::uint64_t seed, bool parallel) {
  if (n < 2) throw std::invalid_argument("simulate_tn: n >= 2 required");
  std::vector<double> out(count);
  const double inv_m = 1.0 / (n - 1.0);
  const std::int64_t cc = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t i = 0; i < cc; ++i) {
    SplitMix64 rng = substream(seed, static_cast<std::uint64_t>(i));
    // B ~ Beta(1, n-1) by inversion, drawn before the summands.
    const double beta = -std::expm1(std::log1p(-rng.next_unit()) * inv_m);
    double sum = 0.0;
    for (int t = 0; t < n; ++t) sum += spec.handle.sampler(rng);
    out[i] = std::sqrt(beta) * sum;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<double> simulate_geometric_sum(const SummandSpec& spec, double p,
                                           std::size_t count,
                                           std::uint64_t seed) {
  return geometric_sum_impl(spec, p, count, seed, true);
}

std::vector<double> simulate_tn(const SummandSpec& spec, int n,
                                std::size_t count, std::uint64_t seed) {
  return tn_impl(spec, n, count, seed, true);
}

namespace serial {

std::vector<double> simulate_geometric_sum(const SummandSpec& spec, double p,
                                           std::size_t count,
                                           std::uint64_t seed) {
  return geometric_sum_impl(spec, p, count, seed, false);
}

std::vector<double> simulate_tn(const SummandSpec& spec, int n,
                                std::size_t count, std::uint64_t seed) {
  return tn_impl(spec, n, count, seed, false);
}

}  // namespace serial

namespace {

constexpr std::size_t kBins = 256;
constexpr std::size_t kBootstrap = 200;

// Equal-mass binned E|E[value | key]| with a Poisson bootstrap error bar.
// `order` must sort `key` ascending.
std::pair<double, double> binned_abs_cond_mean(
    std::span<const std::size_t> order, std::span<const double> value,
    double shift, std::uint64_t seed) {
  const std::size_t n = order.size();
  std::vector<std::size_t> bin_of(n);
  std::vector<double> bin_sum(kBins, 0.0);
  std::vector<std::size_t> bin_count(kBins, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t b = std::min(kBins - 1, r * kBins / n);
    bin_of[order[r]] = b;
    bin_sum[b] += value[order[r]];
    ++bin_count[b];
  }
  double stat = 0.0;
  for (std::size_t b = 0; b < kBins; ++b)
    if (bin_count[b] > 0)
      stat += static_cast<double>(bin_count[b]) / n *
              std::fabs(bin_sum[b] / bin_count[b] - shift);

  std::vector<double> boot(kBootstrap);
  const std::int64_t reps = static_cast<std::int64_t>(kBootstrap);
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < reps; ++r) {
    SplitMix64 rng = substream(seed ^ 0x5bd1e995u, static_cast<std::uint64_t>(r));
    std::vector<double> sum(kBins, 0.0);
    std::vector<double> cnt(kBins, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      // Poisson(1) weight via inversion on the cheap cumulative table.
      const double u = rng.next_unit();
      int w = 0;
      double cum = 0.36787944117144233, term = cum;  // e^{-1}
      while (u > cum && w < 12) {
        ++w;
        term /= w;
        cum += term;
      }
      if (w == 0) continue;
      const std::size_t b = bin_of[i];
      sum[b] += w * value[i];
      cnt[b] += w;
    }
    double total = 0.0;
    for (double c : cnt) total += c;
    double s = 0.0;
    for (std::size_t b = 0; b < kBins; ++b)
      if (cnt[b] > 0.0)
        s += cnt[b] / total * std::fabs(sum[b] / cnt[b] - shift);
    boot[r] = s;
  }
  const double mean = pairwise_mean(boot);
  const double sd = std::sqrt(pairwise_variance(boot, mean));
  return {stat, sd};
}

}  // namespace

CouplingStatistics coupling_statistics(const SummandSpec& spec, double p,
                                       std::size_t count,
                                       std::span<const double> beta_grid,
                                       std::uint64_t seed) {
  if (spec.handle.sampler == nullptr)
    throw std::invalid_argument("coupling_statistics: sampler required");
  std::vector<std::int64_t> n_of;
  std::vector<double> x_eq;
  const CouplingSample cs =
      sample_coupled_geometric_with_n(spec, p, count, seed, n_of, x_eq);
  const std::size_t n = count;

  CouplingStatistics st;
  st.count = n;
  std::vector<double> absd(n), sqd(n), ratio(n);
  for (std::size_t i = 0; i < n; ++i) {
    absd[i] = std::fabs(cs.delta[i]);
    sqd[i] = cs.delta[i] * cs.delta[i];
    ratio[i] = cs.w[i] / static_cast<double>(n_of[i]);
  }
  st.mean_abs_delta = pairwise_mean(absd);
  st.se_abs_delta = std::sqrt(pairwise_variance(absd, st.mean_abs_delta) /
                              static_cast<double>(n));
  st.mean_delta_sq = pairwise_mean(sqd);
  st.se_delta_sq = std::sqrt(pairwise_variance(sqd, st.mean_delta_sq) /
                             static_cast<double>(n));
  for (double beta : beta_grid) {
    std::size_t exceed = 0;
    for (double a : absd)
      if (a > beta) ++exceed;
    st.tail_prob.emplace_back(beta,
                              static_cast<double>(exceed) / static_cast<double>(n));
  }
  st.mean_x_eq = pairwise_mean(x_eq);

  const double root_p = std::sqrt(p);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&cs](std::size_t a, std::size_t b) {
    return cs.w[a] < cs.w[b];
  });

  auto r1 = binned_abs_cond_mean(order, cs.delta, 0.0, seed + 1);
  st.cond_mean_abs_binned = r1.first;
  st.cond_mean_abs_binned_err = r1.second;

  // Route (ii): E[Delta | S] = E[S/N | S] - sqrt(p) E[X^L] with
  // E[X^L] = E X^3 / (3 sigma^2).
  const double shift = root_p * spec.third_moment / (3.0 * spec.sigma2);
  auto r2 = binned_abs_cond_mean(order, ratio, shift, seed + 2);
  st.cond_mean_abs_ratio = r2.first;
  st.cond_mean_abs_ratio_err = r2.second;
  return st;
}

RateFit fit_log_log(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 4)
    throw std::invalid_argument("fit_log_log: need at least 4 points");
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double nd = static_cast<double>(n);
  const double cov = sxy - sx * sy / nd;
  const double varx = sxx - sx * sx / nd;
  const double vary = syy - sy * sy / nd;
  RateFit fit;
  fit.slope = cov / varx;
  fit.intercept = (sy - fit.slope * sx) / nd;
  fit.r_squared = vary > 0.0 ? cov * cov / (varx * vary) : 1.0;
  fit.points_used = n;
  return fit;
}

namespace {

std::vector<double> omega_grid() {
  std::vector<double> w;
  for (int i = 0; i <= 48; ++i)
    w.push_back(0.25 * std::pow(2.0, i / 6.0));  // 0.25 .. 64, log-spaced
  return w;
}

}  // namespace

StudyResult run_convergence_study(const ExperimentConfig& config) {
  const SummandSpec spec = summand_from_json(config.summand);
  const double b = std::sqrt(0.5 * spec.sigma2);
  const DistributionHandle target = laplace_handle({0.0, b});
  const bool geometric = config.model == "geometric_sum";

  double coupling_sup = 0.0;
  if (geometric) coupling_sup = quantile_coupling_sup(spec);

  StudyResult result;
  std::vector<std::string> metrics = config.metrics;

  for (double g : config.grid) {
    std::vector<double> sample =
        geometric
            ? simulate_geometric_sum(spec, g, config.replications, config.seed)
            : simulate_tn(spec, static_cast<int>(g), config.replications,
                          config.seed);
    std::vector<BoundReport> k_bounds, w_bounds, cf_bounds;
    if (geometric) {
      for (BoundReport& r : thm1_bounds(spec, g, coupling_sup, 1)) {
        if (r.name == "wedfg" || r.name == "taubound")
          k_bounds.push_back(std::move(r));
        else if (r.name == "rwrwa")
          w_bounds.push_back(std::move(r));
        else if (r.name == "on11")
          cf_bounds.push_back(std::move(r));
      }
    } else {
      for (BoundReport& r : thm2_bounds(spec, static_cast<int>(g))) {
        if (r.name == "thm2-dk")
          k_bounds.push_back(std::move(r));
        else if (r.name == "thm2-dw")
          w_bounds.push_back(std::move(r));
      }
    }

    auto push_rows = [&result, g](const DistanceEstimate& est,
                                  const std::string& metric,
                                  std::vector<BoundReport>& reports) {
      for (BoundReport& r : reports) {
        r.attach(est);
        StudyRow row;
        row.param = g;
        row.metric = metric;
        row.empirical = est.value;
        row.error = est.error_bound;
        row.bound_tag = r.name;
        row.bound = r.bound;
        row.satisfied = r.satisfied.value_or(false);
        result.rows.push_back(std::move(row));
      }
    };

    for (const std::string& m : metrics) {
      if (m == "K") {
        const DistanceEstimate est = kolmogorov_empirical(sample, target.cdf);
        push_rows(est, "K", k_bounds);
      } else if (m == "W") {
        const DistanceEstimate est = wasserstein1_sample(sample, target);
        push_rows(est, "W", w_bounds);
      } else if (m == "cf-lower" && geometric && !cf_bounds.empty()) {
        const std::vector<double> omegas = omega_grid();
        const double lower = d2_lower_bound_cf(
            [&spec, g](double t) { return geometric_sum_cf(spec, g, t); },
            [b](double t) { return laplace_cf(b, t); }, omegas);
        const DistanceEstimate est{lower, 0.0, "cf-lower"};
        push_rows(est, "cf-lower", cf_bounds);
      }
    }
  }

  // Rate fits per metric: exclude grid points whose tightest bound exceeds
  // 0.5 (pre-asymptotic); fall back to all points when fewer than 4 survive.
  for (const std::string& m : metrics) {
    std::vector<double> xs, ys, xs_all, ys_all;
    for (double g : config.grid) {
      double best_bound = std::numeric_limits<double>::infinity();
      double empirical = -1.0;
      for (const StudyRow& row : result.rows) {
        if (row.metric == m && row.param == g) {
          best_bound = std::min(best_bound, row.bound);
          empirical = row.empirical;
        }
      }
      if (empirical <= 0.0) continue;
      xs_all.push_back(g);
      ys_all.push_back(empirical);
      if (best_bound <= 0.5) {
        xs.push_back(g);
        ys.push_back(empirical);
      }
    }
    const bool use_filtered = xs.size() >= 4;
    const std::vector<double>& fx = use_filtered ? xs : xs_all;
    const std::vector<double>& fy = use_filtered ? ys : ys_all;
    if (fx.size() >= 4) {
      result.rate_fits.emplace_back(m, fit_log_log(fx, fy));
      for (StudyRow& row : result.rows)
        if (row.metric == m)
          row.rate_excluded =
              use_filtered &&
              std::find(xs.begin(), xs.end(), row.param) == xs.end();
    }
  }

  result.all_satisfied = true;
  for (const StudyRow& row : result.rows)
    result.all_satisfied = result.all_satisfied && row.satisfied;

  if (!config.output_path.empty()) {
    result.csv_path = config.output_path + ".csv";
    result.json_path = config.output_path + ".json";
    std::ofstream csv(result.csv_path);
    if (!csv)
      throw std::runtime_error("run_convergence_study: cannot write " +
                               result.csv_path);
    csv << study_csv(result);
    nlohmann::json sidecar;
    sidecar["config"] = config_to_json(config);
    sidecar["version"] = kVersion;
    sidecar["threads"] = thread_count();
    sidecar["all_satisfied"] = result.all_satisfied;
    nlohmann::json fits = nlohmann::json::object();
    for (const auto& [m, fit] : result.rate_fits)
      fits[m] = {{"slope", fit.slope},
                 {"intercept", fit.intercept},
                 {"r_squared", fit.r_squared},
                 {"points_used", fit.points_used}};
    sidecar["rate_fits"] = fits;
    std::ofstream js(result.json_path);
    if (!js)
      throw std::runtime_error("run_convergence_study: cannot write " +
                               result.json_path);
    js << sidecar.dump(2) << "\n";
  }
  return result;
}

std::string study_csv(const StudyResult& result) {
  std::string out = "param,metric,empirical,error,bound_tag,bound,satisfied\n";
  char buf[256];
  for (const StudyRow& r : result.rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%s,%.17g,%.17g,%s,%.17g,%d\n",
                  r.param, r.metric.c_str(), r.empirical, r.error,
                  r.bound_tag.c_str(), r.bound, r.satisfied ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace stein
