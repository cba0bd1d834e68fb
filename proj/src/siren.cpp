#include "sirden/siren.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "fastmath.hpp"
#include "sirden/errors.hpp"
#include "sirden/rng.hpp"

namespace sirden {

int width_for(int height, int width, int base) {
  constexpr int kMinWidth = 16;
  const double scaled =
      static_cast<double>(base) * (static_cast<double>(height) * width) / (512.0 * 512.0);
  return std::max<long>(kMinWidth, std::lround(scaled));
}

SirenNetwork init(const SirenConfig& config, uint64_t seed) {
  if (config.hidden_layers < 1 || config.width < 1) {
    throw Error("init: hidden_layers and width must be >= 1");
  }
  RandomEngine rng(seed);
  SirenNetwork net;
  net.config = config;
  net.layers.resize(config.hidden_layers + 1);
  for (int l = 0; l <= config.hidden_layers; ++l) {
    const int fan_in = l == 0 ? config.in_dim : config.width;
    const int fan_out = l == config.hidden_layers ? config.out_dim : config.width;
    const double bound = l == 0 ? 1.0 / config.in_dim
                                : std::sqrt(6.0 / fan_in) / config.omega_hidden;
    Layer& layer = net.layers[l];
    layer.weight.resize(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        layer.weight(r, c) = rng.uniform(-bound, bound);
      }
    }
    layer.bias = Eigen::VectorXd::Zero(fan_out);
  }
  return net;
}

namespace detail {

void eval_block(const SirenNetwork& net,
                const Eigen::Ref<const Eigen::MatrixX2d>& coords01,
                Eigen::Ref<Eigen::MatrixXd> out) {
  const int L = net.config.hidden_layers;
  Eigen::MatrixXd a = 2.0 * coords01.array() - 1.0;
  Eigen::MatrixXd z;
  for (int l = 0; l < L; ++l) {
    const Layer& layer = net.layers[l];
    z.noalias() = a * layer.weight.transpose();
    z.rowwise() += layer.bias.transpose();
    const double omega = l == 0 ? net.config.omega0 : net.config.omega_hidden;
    z *= omega;
    a.resize(z.rows(), z.cols());
    fastmath::sin_array(z.data(), a.data(), z.size());
  }
  const Layer& last = net.layers[L];
  out.noalias() = a * last.weight.transpose();
  out.rowwise() += last.bias.transpose();
}

}  // namespace detail

Eigen::MatrixXd forward(const SirenNetwork& net, const CoordGrid& grid, int threads) {
  const Eigen::Index n = grid.coords.rows();
  Eigen::MatrixXd out(n, net.config.out_dim);
  threads = std::max(1, threads);
  if (threads == 1 || n < 4096) {
    detail::eval_block(net, grid.coords, out);
  } else {
    std::vector<std::thread> pool;
    const Eigen::Index chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const Eigen::Index lo = t * chunk;
      if (lo >= n) break;
      const Eigen::Index len = std::min<Eigen::Index>(chunk, n - lo);
      pool.emplace_back([&, lo, len] {
        detail::eval_block(net, grid.coords.middleRows(lo, len), out.middleRows(lo, len));
      });
    }
    for (auto& th : pool) th.join();
  }
  if (!out.allFinite()) {
    throw NonFiniteOutput("forward produced NaN/Inf outputs");
  }
  return out;
}

Image render(const SirenNetwork& net, int height, int width, int threads) {
  const CoordGrid grid = make_grid(height, width);
  const Eigen::MatrixXd out = forward(net, grid, threads);
  Image img(height, width, net.config.out_dim);
  const int c = net.config.out_dim;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (int k = 0; k < c; ++k) {
      img.data[i * c + k] = std::clamp(out(i, k), 0.0, 1.0);
    }
  }
  return img;
}

FeatureMap neuron_feature(const SirenNetwork& net, int layer_index, int neuron_index,
                          int height, int width) {
  if (layer_index < 0 || layer_index >= net.config.hidden_layers) {
    throw IndexOutOfRange("neuron_feature: layer_index outside hidden layers");
  }
  if (neuron_index < 0 || neuron_index >= net.config.width) {
    throw IndexOutOfRange("neuron_feature: neuron_index outside layer width");
  }
  const CoordGrid grid = make_grid(height, width);
  Eigen::MatrixXd a = 2.0 * grid.coords.array() - 1.0;
  Eigen::MatrixXd z;
  for (int l = 0; l <= layer_index; ++l) {
    const Layer& layer = net.layers[l];
    z.noalias() = a * layer.weight.transpose();
    z.rowwise() += layer.bias.transpose();
    const double omega = l == 0 ? net.config.omega0 : net.config.omega_hidden;
    z *= omega;
    a.resize(z.rows(), z.cols());
    fastmath::sin_array(z.data(), a.data(), z.size());
  }

  FeatureMap fm;
  fm.layer_index = layer_index;
  fm.neuron_index = neuron_index;
  fm.values = Image(height, width, 1);
  const Eigen::VectorXd col = a.col(neuron_index);
  const double lo = col.minCoeff();
  const double hi = col.maxCoeff();
  if (hi - lo <= 0.0) {
    std::fill(fm.values.data.begin(), fm.values.data.end(), 0.5);
  } else {
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      fm.values.data[i] = (col(i) - lo) / (hi - lo);
    }
  }
  return fm;
}

}  // namespace sirden
