#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sirden/image.hpp"

namespace testsupport {

// Piecewise-smooth grayscale scene (gradient sky, soft hill, dark disk,
// soft box, mild sinusoidal texture) used as the clean target for
// denoising runs. Intensities stay inside [0.12, 0.92] so sigma255=25
// contamination suffers little clamp censoring.
sirden::Image scene(int n);

// Gradient-plus-sinusoids test card for estimator accuracy runs.
sirden::Image textured(int n);

// Three-channel variant of scene (channel-shifted copies).
sirden::Image scene_rgb(int n);

sirden::Image constant(int height, int width, double value, int channels = 1);

// Per-pixel U[0,1] noise image (independent of any library sampler).
sirden::Image white_noise(int height, int width, uint64_t seed);

// 16-bit grayscale PNG writer (the library only writes 8-bit).
void save_png16(const std::vector<uint16_t>& samples, int height, int width,
                const std::string& path);

// 1x1 RGBA PNG, for exercising the loader's alpha rejection.
void save_png_rgba_1x1(const std::string& path);

// Fresh scratch directory under the system temp root.
std::string make_scratch_dir(const std::string& tag);

std::string read_file(const std::string& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;  // empty cell = nullopt

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);

}  // namespace testsupport
