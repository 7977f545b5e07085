#pragma once

#include <cstddef>
#include <span>

namespace stein {

// Worker count: STEIN_THREADS env var if set, else the OpenMP default.
int thread_count();

// Installs STEIN_THREADS as the OpenMP thread count. Call once at startup.
void apply_thread_env();

// Fixed-tree (pairwise) summation. The reduction order is a function of the
// array length alone, so totals are bit-identical regardless of how many
// threads produced the inputs.
double pairwise_sum(std::span<const double> xs);

// Mean and (unbiased) variance via pairwise sums.
double pairwise_mean(std::span<const double> xs);
double pairwise_variance(std::span<const double> xs, double mean);

}  // namespace stein
