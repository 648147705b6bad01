#pragma once

#include <cstdint>
#include <random>

namespace hyperdyn {

/// mt19937_64 with fixed reductions, so draws are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  std::uint64_t next() { return g_(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : g_() % n; }
  /// Uniform double in [0, 1).
  double unit() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  bool coin() { return (g_() >> 63) != 0; }

 private:
  std::mt19937_64 g_;
};

}  // namespace hyperdyn
