#include <doctest.h>

#include <cmath>

#include "sirden/errors.hpp"
#include "sirden/estimator.hpp"
#include "sirden/noise.hpp"
#include "support.hpp"

using sirden::Image;
using sirden::NoiseEstimate;
using sirden::NoiseSpec;

namespace {

Image with_gaussian(const Image& img, double sigma255, uint64_t seed) {
  NoiseSpec spec;
  spec.sigma_lo = spec.sigma_hi = sigma255;
  spec.seed = seed;
  return sirden::add_gaussian(img, spec).noisy;
}

}  // namespace

TEST_CASE("constant image with sigma255=15 estimated within 10%") {
  const Image noisy = with_gaussian(testsupport::constant(256, 256, 0.5), 15.0, 1);
  const NoiseEstimate est = sirden::estimate_sigma(noisy);
  CHECK(est.sigma == doctest::Approx(15.0 / 255.0).epsilon(0.10));
  CHECK(est.patch_size == 7);
  CHECK(est.stride == 3);  // (256-6)^2 = 62500 overlapping patches > 50000
  CHECK(est.iterations_used >= 1);
  CHECK(est.iterations_used <= 20);
}

TEST_CASE("exactly constant image estimates sigma ~ 0") {
  const NoiseEstimate est = sirden::estimate_sigma(testsupport::constant(64, 64, 0.7));
  CHECK(est.sigma <= 1e-6);
  CHECK(est.stride == 1);  // (64-6)^2 = 3364 patches, below the cap
}

TEST_CASE("textured image with sigma255=25 estimated within 15%") {
  const Image noisy = with_gaussian(testsupport::textured(256), 25.0, 2);
  const NoiseEstimate est = sirden::estimate_sigma(noisy);
  CHECK(est.sigma == doctest::Approx(25.0 / 255.0).epsilon(0.15));
}

TEST_CASE("estimates increase strictly with injected noise") {
  const Image base = testsupport::textured(256);
  for (uint64_t seed : {3u, 4u, 5u}) {
    const double e5 = sirden::estimate_sigma(with_gaussian(base, 5.0, seed)).sigma;
    const double e15 = sirden::estimate_sigma(with_gaussian(base, 15.0, seed)).sigma;
    const double e25 = sirden::estimate_sigma(with_gaussian(base, 25.0, seed)).sigma;
    CHECK(e5 < e15);
    CHECK(e15 < e25);
  }
}

TEST_CASE("intensity scaling by k scales the estimate by k") {
  const Image noisy = with_gaussian(testsupport::constant(128, 128, 0.6), 15.0, 6);
  const double full = sirden::estimate_sigma(noisy).sigma;
  for (double k : {0.25, 0.5, 0.9}) {
    Image scaled = noisy;
    for (double& v : scaled.data) v *= k;
    const double got = sirden::estimate_sigma(scaled).sigma;
    CHECK(got == doctest::Approx(k * full).epsilon(0.05));
  }
}

TEST_CASE("estimate survives transposition within 5%") {
  const Image noisy = with_gaussian(testsupport::scene(128), 20.0, 7);
  Image t(noisy.width, noisy.height, 1);
  for (int r = 0; r < noisy.height; ++r) {
    for (int c = 0; c < noisy.width; ++c) t.at(c, r) = noisy.at(r, c);
  }
  const double a = sirden::estimate_sigma(noisy).sigma;
  const double b = sirden::estimate_sigma(t).sigma;
  CHECK(b == doctest::Approx(a).epsilon(0.05));
}

TEST_CASE("RGB channels are estimated independently and RMS-combined") {
  Image img = testsupport::scene_rgb(128);
  NoiseSpec spec;
  spec.sigma_lo = spec.sigma_hi = 18.0;
  spec.seed = 8;
  const Image noisy = sirden::add_gaussian(img, spec).noisy;
  const NoiseEstimate est = sirden::estimate_sigma(noisy);
  REQUIRE(est.channel_sigma.size() == 3);
  double sq = 0.0;
  for (double s : est.channel_sigma) {
    CHECK(s == doctest::Approx(18.0 / 255.0).epsilon(0.15));
    sq += s * s;
  }
  CHECK(est.sigma == doctest::Approx(std::sqrt(sq / 3.0)).epsilon(1e-12));
}

TEST_CASE("images smaller than a patch are rejected") {
  CHECK_THROWS_AS((void)sirden::estimate_sigma(testsupport::constant(6, 6, 0.5)),
                  sirden::ImageTooSmall);
  CHECK_THROWS_AS((void)sirden::estimate_sigma(testsupport::constant(7, 6, 0.5)),
                  sirden::ImageTooSmall);
  CHECK_NOTHROW((void)sirden::estimate_sigma(testsupport::constant(7, 7, 0.5)));
}

TEST_CASE("criterion_threshold is sigma squared") {
  NoiseEstimate est;
  est.sigma = 0.0;
  CHECK(sirden::criterion_threshold(est) == 0.0);
  est.sigma = 25.0 / 255.0;
  CHECK(sirden::criterion_threshold(est) == doctest::Approx(0.009612).epsilon(1e-4));
  CHECK(sirden::criterion_threshold(est) == est.sigma * est.sigma);
}
