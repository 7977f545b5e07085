#include "stein/parallel.hpp"

#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace stein {

int thread_count() {
  if (const char* env = std::getenv("STEIN_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void apply_thread_env() {
#ifdef _OPENMP
  if (const char* env = std::getenv("STEIN_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n <= 64) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double pairwise_mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return pairwise_sum(xs) / static_cast<double>(xs.size());
}

double pairwise_variance(std::span<const double> xs, double mean) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = xs[i] - mean;
    sq[i] = d * d;
  }
  return pairwise_sum(sq) / static_cast<double>(n - 1);
}

}  // namespace stein
