#pragma once

#include <cstddef>

namespace sirden::fastmath {

// Elementwise sin/cos over contiguous buffers. Compiled in a separate
// translation unit with vectorized libm; inputs must be finite.
void sin_array(const double* z, double* out, std::ptrdiff_t n);
void sincos_array(const double* z, double* s, double* c, std::ptrdiff_t n);

}  // namespace sirden::fastmath
