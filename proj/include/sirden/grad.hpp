#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "sirden/image.hpp"
#include "sirden/siren.hpp"

namespace sirden {

// Partial derivatives of the loss, shaped exactly like the network.
struct GradientSet {
  std::vector<Layer> layers;
};

// (coordinate, target) pairs the loss is evaluated over. Coordinates are
// CoordGrid rows in [0,1]^2; targets lie in [0,1].
struct Batch {
  Eigen::MatrixX2d coords;
  Eigen::MatrixXd targets;  // |batch| x out_dim
};

// Batch over every grid point, targets taken from the image row-major.
Batch full_batch(const CoordGrid& grid, const Image& img);

// Mini-batch at the given grid row indices.
Batch index_batch(const CoordGrid& grid, const Image& img, const std::vector<int>& rows);

// Loss = mean over batch rows of the squared residual norm (summed over
// output channels), with exact reverse-mode gradients. Throws
// NonFiniteOutput when loss or any gradient entry is NaN/Inf.
std::pair<double, GradientSet> loss_and_grad(const SirenNetwork& net, const Batch& batch,
                                             int threads = 1);

// Loss without gradients (same reduction).
double loss_value(const SirenNetwork& net, const Batch& batch, int threads = 1);

// Central-difference gradient oracle: (L(p+h) - L(p-h)) / 2h per scalar
// parameter. Verification only; cost scales with parameter count.
GradientSet finite_diff_grad(const SirenNetwork& net, const Batch& batch, double step);

}  // namespace sirden
