#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace sirden {

// H x W x C intensity grid. Values live in [0,1]; data is row-major and
// channel-interleaved: data[(r*width + c)*channels + k].
struct Image {
  int height = 0;
  int width = 0;
  int channels = 1;  // 1 or 3
  std::vector<double> data;

  Image() = default;
  Image(int h, int w, int c, double fill = 0.0)
      : height(h), width(w), channels(c),
        data(static_cast<size_t>(h) * w * c, fill) {}

  size_t pixel_count() const { return static_cast<size_t>(height) * width; }
  size_t size() const { return pixel_count() * channels; }

  double& at(int r, int c, int k = 0) {
    return data[(static_cast<size_t>(r) * width + c) * channels + k];
  }
  double at(int r, int c, int k = 0) const {
    return data[(static_cast<size_t>(r) * width + c) * channels + k];
  }
};

// Ordered list of normalized pixel-center coordinates for an H x W image.
// Row i = r*W + c holds (x, y) = (c/(W-1), r/(H-1)); a 1-pixel axis maps
// to 0.0.
struct CoordGrid {
  int height = 0;
  int width = 0;
  Eigen::MatrixX2d coords;  // column 0 = x, column 1 = y
};

CoordGrid make_grid(int height, int width);

// Mean squared error over all H*W*C elements. Throws ShapeMismatch.
double mse(const Image& a, const Image& b);

// 10*log10(1/mse) with peak 1.0; +infinity when mse == 0.
double psnr(const Image& test, const Image& reference);

}  // namespace sirden
