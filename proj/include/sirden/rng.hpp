#pragma once

#include <cstdint>
#include <random>

namespace sirden {

// Seeded generator with explicit sampling algorithms so that every draw is
// reproducible from the seed alone, independent of the standard library's
// distribution implementations.
class RandomEngine {
 public:
  explicit RandomEngine(uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1).
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [lo, hi). Always consumes exactly one draw.
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Standard normal via Box-Muller (two draws per pair, one pair cached).
  double normal();

  // Poisson sample: inversion below rate 30, PTRS rejection above.
  long long poisson(double rate);

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sirden
