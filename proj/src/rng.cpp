#include "sirden/rng.hpp"

#include <cmath>

namespace sirden {

double RandomEngine::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0,1] so the log is finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * M_PI * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

long long RandomEngine::poisson(double rate) {
  if (rate <= 0.0) return 0;
  if (rate < 30.0) {
    // Inversion by sequential search.
    double p = std::exp(-rate);
    double s = p;
    long long k = 0;
    const double u = uniform01();
    while (u > s) {
      ++k;
      p *= rate / static_cast<double>(k);
      s += p;
      if (k > 2000) break;  // p underflowed; tail mass is negligible
    }
    return k;
  }
  // Hormann's PTRS transformed rejection.
  const double smu = std::sqrt(rate);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_rate = std::log(rate);
  for (;;) {
    const double u = uniform01() - 0.5;
    const double v = uniform01();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + rate + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * log_rate - rate - std::lgamma(kf + 1.0)) {
      return static_cast<long long>(kf);
    }
  }
}

}  // namespace sirden
