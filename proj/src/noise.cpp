#include "sirden/noise.hpp"

#include <algorithm>
#include <cmath>

#include "sirden/errors.hpp"

namespace sirden {

namespace {

void check_sigma_range(const NoiseSpec& spec) {
  if (!(spec.sigma_lo >= 0.0) || !(spec.sigma_hi >= spec.sigma_lo)) {
    throw FormatError("sigma range must satisfy 0 <= lo <= hi");
  }
}

void check_alpha_range(const NoiseSpec& spec) {
  if (!(spec.alpha_lo > 0.0) || !(spec.alpha_hi >= spec.alpha_lo)) {
    throw FormatError("alpha range must satisfy 0 < lo <= hi");
  }
}

double draw_in(RandomEngine& rng, double lo, double hi) {
  if (lo == hi) return lo;
  return lo + (hi - lo) * rng.uniform01();
}

void clamp_unit(std::vector<double>& v) {
  for (double& x : v) x = std::clamp(x, 0.0, 1.0);
}

}  // namespace

namespace detail {

std::vector<double> gaussian_raw(const Image& img, double sigma255, RandomEngine& rng) {
  const double s = sigma255 / 255.0;
  std::vector<double> out(img.data.size());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = img.data[i] + s * rng.normal();
  }
  return out;
}

std::vector<double> poisson_gaussian_raw(const Image& img, double sigma255, double alpha,
                                         RandomEngine& rng) {
  std::vector<double> out(img.data.size());
  for (size_t i = 0; i < out.size(); ++i) {
    const double s255 = img.data[i] * 255.0;
    const double shot = alpha * static_cast<double>(rng.poisson(s255 / alpha));
    out[i] = (shot + sigma255 * rng.normal()) / 255.0;
  }
  return out;
}

}  // namespace detail

GaussianResult add_gaussian(const Image& img, const NoiseSpec& spec) {
  check_sigma_range(spec);
  RandomEngine rng(spec.seed);
  const double sigma255 = draw_in(rng, spec.sigma_lo, spec.sigma_hi);

  GaussianResult res;
  res.sigma255 = sigma255;
  res.noisy = img;
  res.noisy.data = detail::gaussian_raw(img, sigma255, rng);
  clamp_unit(res.noisy.data);
  return res;
}

PoissonGaussianResult add_poisson_gaussian(const Image& img, const NoiseSpec& spec) {
  check_sigma_range(spec);
  check_alpha_range(spec);
  RandomEngine rng(spec.seed);
  // Sigma is drawn before alpha so fixing one range does not shift the other.
  const double sigma255 = draw_in(rng, spec.sigma_lo, spec.sigma_hi);
  const double alpha = draw_in(rng, spec.alpha_lo, spec.alpha_hi);

  PoissonGaussianResult res;
  res.sigma255 = sigma255;
  res.alpha = alpha;
  res.noisy = img;
  res.noisy.data = detail::poisson_gaussian_raw(img, sigma255, alpha, rng);
  clamp_unit(res.noisy.data);
  return res;
}

}  // namespace sirden
