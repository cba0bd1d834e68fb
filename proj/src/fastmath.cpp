// Built with -ffast-math so the loops vectorize to libmvec sin/cos.
// Callers guarantee finite inputs; outputs agree with scalar libm to a
// few ulp.
#include "fastmath.hpp"

#include <cmath>

namespace sirden::fastmath {

void sin_array(const double* z, double* out, std::ptrdiff_t n) {
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = std::sin(z[i]);
}

void sincos_array(const double* z, double* s, double* c, std::ptrdiff_t n) {
  for (std::ptrdiff_t i = 0; i < n; ++i) s[i] = std::sin(z[i]);
  for (std::ptrdiff_t i = 0; i < n; ++i) c[i] = std::cos(z[i]);
}

}  // namespace sirden::fastmath
