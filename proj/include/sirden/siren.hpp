#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "sirden/image.hpp"

namespace sirden {

struct SirenConfig {
  int hidden_layers = 6;
  int width = 256;
  int in_dim = 2;
  int out_dim = 1;          // 1 or 3
  double omega0 = 30.0;     // first-layer frequency scale
  double omega_hidden = 30.0;
};

struct Layer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

// Sinusoidal coordinate MLP. layers has hidden_layers + 1 entries; every
// layer but the last is followed by sin(omega * z). Inputs come from a
// [0,1]^2 CoordGrid and are mapped to [-1,1]^2 internally.
struct SirenNetwork {
  SirenConfig config;
  std::vector<Layer> layers;
};

// Post-sine activation of one neuron over a full grid, min-max normalized
// to [0,1] (all 0.5 when the activation is constant).
struct FeatureMap {
  int layer_index = 0;
  int neuron_index = 0;
  Image values;
};

// Hidden width scaled to the image resolution:
// max(16, round(base * H*W / 512^2)).
int width_for(int height, int width, int base = 256);

// First layer uniform on [-1/in_dim, 1/in_dim]; later layers uniform on
// [-sqrt(6/fan_in)/omega_hidden, +...]; biases zero. Deterministic in seed.
SirenNetwork init(const SirenConfig& config, uint64_t seed);

// Evaluates the network on every grid row; returns |grid| x out_dim,
// unclamped. Throws NonFiniteOutput when any output is NaN/Inf.
Eigen::MatrixXd forward(const SirenNetwork& net, const CoordGrid& grid, int threads = 1);

// forward over make_grid(height, width), clamped to [0,1].
Image render(const SirenNetwork& net, int height, int width, int threads = 1);

FeatureMap neuron_feature(const SirenNetwork& net, int layer_index, int neuron_index,
                          int height, int width);

namespace detail {

// Evaluates rows of coords01 (in [0,1]^2) into out (unclamped, unchecked).
void eval_block(const SirenNetwork& net,
                const Eigen::Ref<const Eigen::MatrixX2d>& coords01,
                Eigen::Ref<Eigen::MatrixXd> out);

}  // namespace detail

}  // namespace sirden
