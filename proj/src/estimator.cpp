#include "sirden/estimator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "sirden/errors.hpp"

namespace sirden {

namespace {

constexpr int kPatch = 7;
constexpr int kMaxPatches = 50000;  // above this, sample on a stride-3 grid
constexpr int kMaxTruncationPasses = 20;

struct ChannelEstimate {
  double variance = 0.0;
  int stride = 1;
  int iterations = 0;
};

ChannelEstimate estimate_channel(const Image& img, int ch) {
  const int rows = img.height - kPatch + 1;
  const int cols = img.width - kPatch + 1;
  const long full = static_cast<long>(rows) * cols;
  const int stride = full > kMaxPatches ? 3 : 1;

  const int nr = (rows - 1) / stride + 1;
  const int nc = (cols - 1) / stride + 1;
  const long n = static_cast<long>(nr) * nc;
  const int d = kPatch * kPatch;

  Eigen::MatrixXd patches(n, d);
  long row = 0;
  for (int r = 0; r < rows; r += stride) {
    for (int c = 0; c < cols; c += stride) {
      int k = 0;
      for (int pr = 0; pr < kPatch; ++pr) {
        for (int pc = 0; pc < kPatch; ++pc) {
          patches(row, k++) = img.at(r + pr, c + pc, ch);
        }
      }
      ++row;
    }
  }

  Eigen::RowVectorXd mean = patches.colwise().mean();
  patches.rowwise() -= mean;
  Eigen::MatrixXd cov =
      (patches.transpose() * patches) / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  const Eigen::VectorXd lam = solver.eigenvalues();  // ascending

  // Prefix means of the sorted spectrum let each truncation pass reduce to
  // "how many eigenvalues sit at or below the current estimate".
  Eigen::VectorXd prefix(d);
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    acc += lam[i];
    prefix[i] = acc / (i + 1);
  }

  double est = prefix[d - 1];  // mean of the full spectrum
  int kept = d;
  ChannelEstimate out;
  out.stride = stride;
  for (int pass = 0; pass < kMaxTruncationPasses; ++pass) {
    ++out.iterations;
    int k = 0;
    while (k < d && lam[k] <= est) ++k;
    if (k == 0) break;  // estimate fell below the whole spectrum
    const double next = prefix[k - 1];
    if (k == kept) {
      est = next;
      break;
    }
    kept = k;
    est = next;
  }

  out.variance = std::max(est, 0.0);
  return out;
}

}  // namespace

NoiseEstimate estimate_sigma(const Image& img) {
  if (img.height < kPatch || img.width < kPatch) {
    throw ImageTooSmall("noise estimation needs at least a 7x7 image");
  }

  NoiseEstimate est;
  est.patch_size = kPatch;
  double var_sum = 0.0;
  for (int ch = 0; ch < img.channels; ++ch) {
    const ChannelEstimate ce = estimate_channel(img, ch);
    est.channel_sigma.push_back(std::sqrt(ce.variance));
    est.stride = ce.stride;
    est.iterations_used = std::max(est.iterations_used, ce.iterations);
    var_sum += ce.variance;
  }
  est.sigma = std::sqrt(var_sum / img.channels);
  return est;
}

double criterion_threshold(const NoiseEstimate& est) { return est.sigma * est.sigma; }

}  // namespace sirden
