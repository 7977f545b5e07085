// Command-line front end: convergence studies, solution-bound checks,
// bound evaluation, exact distances and the Rayleigh/chi constants.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stein/bounds.hpp"
#include "stein/distributions.hpp"
#include "stein/equilibrium.hpp"
#include "stein/experiments.hpp"
#include "stein/metrics.hpp"
#include "stein/parallel.hpp"
#include "stein/stein_chi.hpp"
#include "stein/stein_laplace.hpp"
#include "stein/version.hpp"

using namespace stein;

namespace {

int cmd_constants(bool json_mode, const std::string& out_path) {
  const RayleighConstants rc = rayleigh_constants();
  const ConstantsAudit audit = audit_printed_constants();
  nlohmann::json j = {
      {"x_star", {{"value", rc.x_star}, {"tag", "propapp3"}}},
      {"c_xf", {{"value", rc.c_xf}, {"printed", 2.325}, {"tag", "bound3"}}},
      {"c_fprime",
       {{"value", rc.c_fprime}, {"printed", 6.11}, {"tag", "bound4"}}},
      {"c_xfpp",
       {{"value", rc.c_xfpp}, {"printed", 11.30}, {"tag", "bound5"}}},
      {"rayleigh_fprime_scaled",
       {{"value", audit.rayleigh_recomputed},
        {"printed", 8.6408},
        {"tag", "pl79"}}},
      {"chi2_uniform",
       {{"value", chi_uniform_solution_bound(2.0)},
        {"printed", std::exp(1.0) / 2.0},
        {"tag", "bound1"}}},
      {"kolmogorov_coupling",
       {{"value", audit.coupling_exact},
        {"printed", 11.56},
        {"tag", "ghjk2"}}}};
  if (json_mode) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("x_star=%.6f                     [propapp3]\n", rc.x_star);
    std::printf("c_xf=%.4f        (printed 2.325)  [bound3]\n", rc.c_xf);
    std::printf("c_fprime=%.4f    (printed 6.11)   [bound4]\n", rc.c_fprime);
    std::printf("c_xfpp=%.4f     (printed 11.30)  [bound5]\n", rc.c_xfpp);
    std::printf("scaled f' const=%.5f (printed 8.6408) [pl79]\n",
                audit.rayleigh_recomputed);
    std::printf("chi(2) uniform const=%.6f (= e/2)    [bound1]\n",
                chi_uniform_solution_bound(2.0));
    std::printf("coupling const=%.6f vs printed 11.56  [ghjk2]\n",
                audit.coupling_exact);
  }
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_study(const std::string& config_path, std::optional<std::uint64_t> seed,
              bool json_mode, const std::string& out_path) {
  nlohmann::json j;
  {
    std::ifstream f(config_path);
    if (!f) {
      std::cerr << "error: cannot open config " << config_path << "\n";
      return 2;
    }
    try {
      f >> j;
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error: config parse failure: " << e.what() << "\n";
      return 2;
    }
  }
  ExperimentConfig cfg;
  try {
    cfg = config_from_json(j);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (seed) cfg.seed = *seed;
  if (!out_path.empty()) cfg.output_path = out_path;
  const StudyResult result = run_convergence_study(cfg);
  if (json_mode) {
    nlohmann::json rows = nlohmann::json::array();
    for (const StudyRow& r : result.rows)
      rows.push_back({{"param", r.param},
                      {"metric", r.metric},
                      {"empirical", r.empirical},
                      {"error", r.error},
                      {"bound_tag", r.bound_tag},
                      {"bound", r.bound},
                      {"satisfied", r.satisfied}});
    nlohmann::json fits = nlohmann::json::object();
    for (const auto& [m, fit] : result.rate_fits)
      fits[m] = {{"slope", fit.slope}, {"r_squared", fit.r_squared}};
    std::cout << nlohmann::json({{"rows", rows},
                                 {"rate_fits", fits},
                                 {"all_satisfied", result.all_satisfied}})
                     .dump(2)
              << "\n";
  } else {
    std::fputs(study_csv(result).c_str(), stdout);
    for (const auto& [m, fit] : result.rate_fits)
      std::printf("# rate[%s]: slope=%.4f r2=%.4f\n", m.c_str(), fit.slope,
                  fit.r_squared);
  }
  if (!result.all_satisfied) {
    for (const StudyRow& r : result.rows)
      if (!r.satisfied)
        std::fprintf(stderr,
                     "violation: param=%g metric=%s bound=%s (%g) empirical=%g "
                     "error=%g\n",
                     r.param, r.metric.c_str(), r.bound_tag.c_str(), r.bound,
                     r.empirical, r.error);
    return 1;
  }
  return 0;
}

int cmd_stein_check(const std::string& cls, double b, int points,
                    bool json_mode) {
  if (points <= 0) {
    std::cerr << "error: --points must be positive\n";
    return 2;
  }
  std::vector<TestFunction> family;
  if (cls == "indicator") {
    for (int i = 0; i < 8; ++i)
      family.push_back(indicator_halfline(-2.0 * b + 4.0 * b * i / 7.0));
  } else if (cls == "lipschitz") {
    family.push_back(sin_test_function());
    family.push_back(identity_test_function());
    for (double eps : {0.5 * b, b, 2.0 * b})
      family.push_back(smoothed_indicator(0.5 * b, eps));
  } else if (cls == "smooth") {
    for (double w : {0.5, 1.0, 2.0})
      family.push_back(cos_smooth2_test_function(w));
    family.push_back(sin_test_function());
  } else {
    std::cerr << "error: --class must be indicator, lipschitz or smooth\n";
    return 2;
  }
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = -10.0 * b + 20.0 * b * i / std::max(points - 1, 1);

  double worst_ratio = 0.0;
  nlohmann::json rows = nlohmann::json::array();
  for (const TestFunction& h : family) {
    for (const BoundReport& r : verify_solution_bounds(h, b, grid)) {
      const double ratio = r.empirical->value / r.bound;
      worst_ratio = std::max(worst_ratio, ratio);
      rows.push_back({{"test_function", h.name},
                      {"bound", r.name},
                      {"available", r.bound},
                      {"used", r.empirical->value},
                      {"ratio", ratio}});
      if (!json_mode)
        std::printf("%-42s %-16s used %.6g of %.6g (ratio %.6f)\n",
                    h.name.c_str(), r.name.c_str(), r.empirical->value,
                    r.bound, ratio);
    }
  }
  if (json_mode)
    std::cout << nlohmann::json({{"rows", rows}, {"max_ratio", worst_ratio}})
                     .dump(2)
              << "\n";
  else
    std::printf("max ratio used/available: %.8f\n", worst_ratio);
  return worst_ratio <= 1.0 + 1e-6 ? 0 : 1;
}

int cmd_bounds(const std::string& family, const std::string& summand_json,
               double p, int n, double q, std::optional<int> k,
               bool json_mode) {
  SummandSpec spec = summand_from_json(nlohmann::json::parse(summand_json));
  std::vector<BoundReport> reports;
  if (family == "thm1")
    reports = thm1_bounds(spec, p, q, k);
  else if (family == "thm2")
    reports = thm2_bounds(spec, n);
  else if (family == "clt")
    reports = clt_bounds(spec, n);
  else if (family == "un")
    reports = un_bounds(n);
  else if (family == "pike") {
    BoundReport r;
    r.name = "pike-ren-dbw";
    r.inputs = {{"p", p}};
    r.bound = pike_ren_bw_bound(spec.sigma(), p, spec.abs_moment(3));
    reports.push_back(r);
  } else {
    std::cerr << "error: --family must be thm1, thm2, clt, un or pike\n";
    return 2;
  }
  if (json_mode) {
    nlohmann::json arr = nlohmann::json::array();
    for (const BoundReport& r : reports) arr.push_back(r);
    std::cout << arr.dump(2) << "\n";
  } else {
    for (const BoundReport& r : reports)
      std::printf("%-10s %.8g\n", r.name.c_str(), r.bound);
  }
  return 0;
}

int cmd_metrics(int n, bool json_mode) {
  const DistributionHandle u = rayleigh_handle(1.0 / std::sqrt(2.0));
  const DistributionHandle un = scaled_beta_root_handle(n);
  const DistanceEstimate dk = kolmogorov_exact(un, u);
  const DistanceEstimate dw = wasserstein1_cdf(un, u);
  nlohmann::json j = {{"n", n},
                      {"d_K", dk},
                      {"d_W", dw},
                      {"bounds", nlohmann::json::array()}};
  for (BoundReport& r : un_bounds(n)) {
    if (r.name == "pl12" || r.name == "eskol")
      r.attach(dk);
    else
      r.attach(dw);
    j["bounds"].push_back(r);
  }
  if (json_mode) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("U_%d vs the Rayleigh mixing law\n", n);
    std::printf("  d_K = %.8f (err %.1e)\n", dk.value, dk.error_bound);
    std::printf("  d_W = %.8f (err %.1e)\n", dw.value, dw.error_bound);
    for (const auto& r : j["bounds"])
      std::printf("  %-6s bound %.6g satisfied=%s\n",
                  r["name"].get<std::string>().c_str(),
                  r["bound"].get<double>(),
                  r.contains("satisfied")
                      ? (r["satisfied"].get<bool>() ? "yes" : "no")
                      : "-");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_env();
  CLI::App app{"Laplace-approximation error-bound toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  bool json_mode = false;
  app.add_flag("--json", json_mode, "machine-readable JSON output");

  auto* constants_cmd = app.add_subcommand(
      "constants", "Rayleigh/chi Stein-equation constants and the audit");
  std::string out_path;
  constants_cmd->add_option("--out", out_path, "also write JSON to this path");

  auto* study_cmd =
      app.add_subcommand("study", "run a convergence study from a JSON config");
  std::string config_path;
  study_cmd->add_option("--config", config_path, "config JSON path")
      ->required();
  std::optional<std::uint64_t> seed;
  study_cmd->add_option("--seed", seed, "override the config seed");
  std::string study_out;
  study_cmd->add_option("--out", study_out, "output path stem (csv + json)");

  auto* check_cmd = app.add_subcommand(
      "stein-check", "verify solution bounds over a test-function family");
  std::string cls = "lipschitz";
  check_cmd->add_option("--class", cls, "indicator | lipschitz | smooth");
  double b = 1.0;
  check_cmd->add_option("--b", b, "Laplace scale")->check(CLI::PositiveNumber);
  int points = 200;
  check_cmd->add_option("--points", points, "grid points");

  auto* bounds_cmd =
      app.add_subcommand("bounds", "evaluate a bound family as numbers");
  std::string family = "thm1";
  bounds_cmd->add_option("--family", family, "thm1 | thm2 | clt | un | pike");
  std::string summand =
      R"({"name":"rademacher","params":{"sigma":1.0}})";
  bounds_cmd->add_option("--summand", summand, "summand spec JSON");
  double p = 0.01;
  bounds_cmd->add_option("--p", p, "geometric parameter");
  int n = 10;
  bounds_cmd->add_option("--n", n, "number of summands");
  double q = 1.0;
  bounds_cmd->add_option("--q", q, "quantile-coupling sup");
  std::optional<int> k;
  bounds_cmd->add_option("--k", k, "moment order for the tail bound");

  auto* metrics_cmd = app.add_subcommand(
      "metrics", "exact distances between U_n and the Rayleigh mixing law");
  int metrics_n = 10;
  metrics_cmd->add_option("--un", metrics_n, "n for U_n")
      ->check(CLI::Range(2, 1000000));

  CLI11_PARSE(app, argc, argv);

  try {
    if (constants_cmd->parsed()) return cmd_constants(json_mode, out_path);
    if (study_cmd->parsed())
      return cmd_study(config_path, seed, json_mode, study_out);
    if (check_cmd->parsed())
      return cmd_stein_check(cls, b, points, json_mode);
    if (bounds_cmd->parsed())
      return cmd_bounds(family, summand, p, n, q, k, json_mode);
    if (metrics_cmd->parsed()) return cmd_metrics(metrics_n, json_mode);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
