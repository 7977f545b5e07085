#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "stein/distributions.hpp"
#include "stein/report.hpp"

namespace stein {

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t replications = 1000000;
  nlohmann::json summand;           // {name, params}
  std::string model;                // "geometric_sum" | "beta_normalised_sum"
  std::vector<double> grid;         // p values or n values
  std::vector<std::string> metrics; // subset of {"K","W","cf-lower"}
  std::string output_path;
};

// Parses and validates; throws std::invalid_argument naming the offending
// field.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

// Sorted sample of S_p = sqrt(p) sum_{i=1}^{N_p} X_i, N_p ~ Geo(p)
// independent of the X_i. OpenMP-parallel over replications; output depends
// only on (spec, p, count, seed).
std::vector<double> simulate_geometric_sum(const SummandSpec& spec, double p,
                                           std::size_t count,
                                           std::uint64_t seed);

// Sorted sample of T_n = sqrt(B_{n-1}) sum_{i=1}^n X_i, B_{n-1} ~ Beta(1,n-1)
// independent of the X_i.
std::vector<double> simulate_tn(const SummandSpec& spec, int n,
                                std::size_t count, std::uint64_t seed);

namespace serial {
// Reference kernels: identical output to the parallel versions, single
// thread. Kept for testing and for the benchmark target.
std::vector<double> simulate_geometric_sum(const SummandSpec& spec, double p,
                                           std::size_t count,
                                           std::uint64_t seed);
std::vector<double> simulate_tn(const SummandSpec& spec, int n,
                                std::size_t count, std::uint64_t seed);
}  // namespace serial

struct CouplingStatistics {
  double mean_abs_delta = 0.0;
  double se_abs_delta = 0.0;
  double mean_delta_sq = 0.0;
  double se_delta_sq = 0.0;
  std::vector<std::pair<double, double>> tail_prob;  // (beta, P(|Delta|>beta))
  // E|E[Delta | S]| two ways: (i) equal-mass binned conditional means of
  // Delta, (ii) binned conditional means of S/N shifted by sqrt(p) E[X^L].
  double cond_mean_abs_binned = 0.0;
  double cond_mean_abs_binned_err = 0.0;   // Poisson bootstrap, 200 resamples
  double cond_mean_abs_ratio = 0.0;
  double cond_mean_abs_ratio_err = 0.0;
  double mean_x_eq = 0.0;  // sample mean of X_N^L
  std::size_t count = 0;
};

CouplingStatistics coupling_statistics(const SummandSpec& spec, double p,
                                       std::size_t count,
                                       std::span<const double> beta_grid,
                                       std::uint64_t seed);

struct StudyRow {
  double param = 0.0;
  std::string metric;
  double empirical = 0.0;
  double error = 0.0;
  std::string bound_tag;
  double bound = 0.0;
  bool satisfied = false;
  bool rate_excluded = false;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points_used = 0;
};

// Least squares of log(y) on log(x); requires at least 4 points.
RateFit fit_log_log(std::span<const double> x, std::span<const double> y);

struct StudyResult {
  std::vector<StudyRow> rows;
  std::vector<std::pair<std::string, RateFit>> rate_fits;  // per metric
  bool all_satisfied = true;
  std::string csv_path;
  std::string json_path;
};

// Runs the full study described by the config: simulate each grid point,
// attach every applicable bound, fit rates, and (when output_path is set)
// write the CSV table plus a JSON sidecar with the config and versions.
// Bit-identical output for identical (config, seed).
StudyResult run_convergence_study(const ExperimentConfig& config);

std::string study_csv(const StudyResult& result);

}  // namespace stein
