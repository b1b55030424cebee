#pragma once

#include <cstdint>
#include <random>

namespace mhf {

/// Seed for every randomized builder and experiment.
struct Seed {
  std::uint64_t value = 0;
};

/// Deterministic generator. std::mt19937_64's output sequence is fixed by the
/// standard, but the std distributions are not, so bounded draws are done
/// here by rejection to keep results identical across standard libraries.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed.value) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi]; requires lo <= hi.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo;
    if (span == ~std::uint64_t{0}) return next();
    const std::uint64_t range = span + 1;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range) - 1;
    std::uint64_t x = next();
    while (x > limit) x = next();
    return lo + x % range;
  }

  /// Uniform double in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Independent child stream, e.g. one per trial.
  static Seed derive(Seed base, std::uint64_t stream) {
    std::uint64_t z = base.value + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return Seed{z ^ (z >> 31)};
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mhf
