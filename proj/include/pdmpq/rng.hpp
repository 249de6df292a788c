#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pdmpq {

/// Derives an independent stream seed from a root seed and a stream label.
/// SplitMix64 finalizer; the same (root, label) pair always yields the same
/// stream, which is what makes every stochastic stage reproducible from one
/// 64-bit seed.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t label) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (label + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic random stream. Uniform doubles are produced from raw 64-bit
/// draws rather than std::uniform_real_distribution so that output is
/// bit-identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard exponential via inverse transform.
  double exponential() { return -std::log(uniform()); }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace pdmpq
