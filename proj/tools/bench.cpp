// Benchmark: OpenMP kernels against their serial reference implementations.
// The outputs are asserted identical before timing is reported.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "stein/equilibrium.hpp"
#include "stein/experiments.hpp"
#include "stein/parallel.hpp"

using namespace stein;
using Clock = std::chrono::steady_clock;

namespace {

double time_once(const std::function<std::vector<double>()>& run,
                 std::vector<double>& out) {
  const auto t0 = Clock::now();
  out = run();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* name, double serial_s, double parallel_s, bool match) {
  std::printf("%-28s serial %7.3fs   parallel %7.3fs   speedup %.2fx   %s\n",
              name, serial_s, parallel_s, serial_s / parallel_s,
              match ? "outputs identical" : "OUTPUT MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_env();
  std::size_t count = 1000000;
  if (argc > 1) count = std::strtoull(argv[1], nullptr, 10);
  const std::uint64_t seed = 424242;
  std::printf("threads: %d, replications: %zu\n", thread_count(), count);

  bool all_match = true;
  {
    const SummandSpec spec = rademacher_summand(1.0);
    std::vector<double> a, b;
    const double ts = time_once(
        [&] { return serial::simulate_geometric_sum(spec, 0.01, count, seed); },
        a);
    const double tp = time_once(
        [&] { return simulate_geometric_sum(spec, 0.01, count, seed); }, b);
    report("geometric sum (p=0.01)", ts, tp, a == b);
    all_match = all_match && a == b;
  }
  {
    const SummandSpec spec = laplace_summand(1.0);
    std::vector<double> a, b;
    const double ts = time_once(
        [&] { return serial::simulate_geometric_sum(spec, 0.02, count, seed); },
        a);
    const double tp = time_once(
        [&] { return simulate_geometric_sum(spec, 0.02, count, seed); }, b);
    report("geometric sum (laplace)", ts, tp, a == b);
    all_match = all_match && a == b;
  }
  {
    const SummandSpec spec = rademacher_summand(1.0);
    std::vector<double> a, b;
    const double ts =
        time_once([&] { return serial::simulate_tn(spec, 100, count, seed); }, a);
    const double tp =
        time_once([&] { return simulate_tn(spec, 100, count, seed); }, b);
    report("beta-normalised sum (n=100)", ts, tp, a == b);
    all_match = all_match && a == b;
  }
  {
    const SummandSpec spec = rademacher_summand(1.0);
    CouplingSample a, b;
    const auto t0 = Clock::now();
    a = serial::sample_coupled_geometric(spec, 0.02, count, seed);
    const double ts = std::chrono::duration<double>(Clock::now() - t0).count();
    const auto t1 = Clock::now();
    b = sample_coupled_geometric(spec, 0.02, count, seed);
    const double tp = std::chrono::duration<double>(Clock::now() - t1).count();
    const bool match = a.w == b.w && a.w_eq == b.w_eq && a.delta == b.delta;
    report("coupled sampler (p=0.02)", ts, tp, match);
    all_match = all_match && match;
  }
  return all_match ? 0 : 1;
}
