#pragma once

#include <cstdint>
#include <random>

namespace cubelearn {

// All randomness in the library flows through this wrapper around
// std::mt19937_64 (the 64-bit Mersenne Twister, whose output sequence is
// fixed by the C++ standard). The standard <random> distributions are
// implementation-defined, so the mappings from raw 64-bit draws to doubles,
// booleans and bounded integers are spelled out here instead; given a seed,
// every generated dataset is bit-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// ±1 with P(+1) = p_plus.
  int pm1(double p_plus) { return bernoulli(p_plus) ? +1 : -1; }

  /// Uniform integer in [0,n), n > 0. Multiply-shift mapping; the bias of
  /// at most n/2^64 is irrelevant at the sample sizes used here.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 gen_;
};

/// SplitMix64 finalizer, used to derive independent child seeds for sweep
/// cells from (base seed, cell index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace cubelearn
