#pragma once

#include <cstdint>

namespace stein {

// SplitMix64: one mixing round per output, period 2^64. Plenty for the
// Monte Carlo sample sizes used here, and cheap enough to sit in the
// innermost sampling loops.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1): 53-bit draw offset by half an ulp,
  // so 0 and 1 never occur and log()/quantile() are always safe.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent stream for replication `index` under a master seed. State
// depends only on (seed, index), never on thread schedule, which is what
// makes the parallel kernels bit-reproducible.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(mix64(seed + 0x9e3779b97f4a7c15ULL * (index + 1)));
}

}  // namespace stein
