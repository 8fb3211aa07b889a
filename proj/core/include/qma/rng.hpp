#pragma once

#include <cstdint>
#include <random>

namespace qma {

// mt19937_64 with a platform-independent uniform mapping; distributions from
// <random> are implementation-defined, raw bits are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  double uniform01() { return double(g_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  std::uint64_t bits() { return g_(); }
  int index(int count) { return int(g_() % std::uint64_t(count)); }

 private:
  std::mt19937_64 g_;
};

}  // namespace qma
