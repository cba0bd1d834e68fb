#pragma once

#include <vector>

#include "sirden/image.hpp"

namespace sirden {

// Blind noise-level estimate from a single image. Sigma lives on the same
// [0,1] scale as Image::data.
struct NoiseEstimate {
  double sigma = 0.0;
  int patch_size = 7;
  int stride = 1;
  int iterations_used = 0;            // truncation passes actually used
  std::vector<double> channel_sigma;  // per-channel, [0,1] scale
};

// Patch-PCA estimator: eigenvalues of the 7x7 patch covariance are
// iteratively truncated to the set at or below their own mean; the fixed
// point tracks the noise floor of the spectrum. Channels are estimated
// independently and combined by RMS. Throws ImageTooSmall below 7x7.
NoiseEstimate estimate_sigma(const Image& img);

// Mean-squared-error level a fit may reach before it starts reproducing
// noise: sigma^2, compared against the per-element training MSE.
double criterion_threshold(const NoiseEstimate& est);

}  // namespace sirden
