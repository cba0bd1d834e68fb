#include "sirden/image.hpp"

#include <cmath>
#include <limits>

#include "sirden/errors.hpp"

namespace sirden {

CoordGrid make_grid(int height, int width) {
  if (height < 1 || width < 1) {
    throw Error("make_grid: dimensions must be positive");
  }
  CoordGrid grid;
  grid.height = height;
  grid.width = width;
  grid.coords.resize(static_cast<Eigen::Index>(height) * width, 2);
  const double dx = width > 1 ? 1.0 / (width - 1) : 0.0;
  const double dy = height > 1 ? 1.0 / (height - 1) : 0.0;
  Eigen::Index i = 0;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c, ++i) {
      grid.coords(i, 0) = c * dx;
      grid.coords(i, 1) = r * dy;
    }
  }
  return grid;
}

static void require_same_shape(const Image& a, const Image& b) {
  if (a.height != b.height || a.width != b.width || a.channels != b.channels) {
    throw ShapeMismatch("images differ in shape");
  }
}

double mse(const Image& a, const Image& b) {
  require_same_shape(a, b);
  double acc = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.data.size());
}

double psnr(const Image& test, const Image& reference) {
  const double m = mse(test, reference);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / m);
}

}  // namespace sirden
