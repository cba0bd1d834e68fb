#pragma once

#include <cstdint>
#include <vector>

#include "sirden/image.hpp"
#include "sirden/rng.hpp"

namespace sirden {

enum class NoiseKind { gaussian, poisson_gaussian };

// Contamination parameters. Sigma and alpha are expressed on the 0-255
// scale; lo == hi pins the value, otherwise it is drawn uniformly once per
// image and shared by all pixels.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::gaussian;
  double sigma_lo = 0.0;
  double sigma_hi = 0.0;
  double alpha_lo = 50.0;
  double alpha_hi = 100.0;
  uint64_t seed = 0;
};

struct GaussianResult {
  Image noisy;
  double sigma255 = 0.0;
};

struct PoissonGaussianResult {
  Image noisy;
  double sigma255 = 0.0;
  double alpha = 0.0;
};

// Adds i.i.d. N(0, (sigma/255)^2) per element, then clamps to [0,1].
GaussianResult add_gaussian(const Image& img, const NoiseSpec& spec);

// Scaled-Poisson shot noise plus Gaussian read noise on the 0-255 scale:
// noisy255 = alpha * Poisson(s255/alpha) + N(0, sigma^2), then /255 and
// clamp. Zero-intensity pixels receive only the Gaussian term.
PoissonGaussianResult add_poisson_gaussian(const Image& img, const NoiseSpec& spec);

namespace detail {

// Pre-clamp contamination paths, exposed so statistical checks can run at
// interior intensities without clamp censoring. Values on the [0,1] scale.
std::vector<double> gaussian_raw(const Image& img, double sigma255, RandomEngine& rng);
std::vector<double> poisson_gaussian_raw(const Image& img, double sigma255, double alpha,
                                         RandomEngine& rng);

}  // namespace detail

}  // namespace sirden
