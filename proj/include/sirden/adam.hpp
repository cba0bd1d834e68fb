#pragma once

#include <utility>
#include <vector>

#include "sirden/grad.hpp"
#include "sirden/siren.hpp"

namespace sirden {

// Adam with decoupled weight decay restricted to decayed_layers (by
// default the last hidden layer and the output layer). Decay multiplies
// weights by (1 - lr*lambda) after the Adam update; biases are never
// decayed.
struct AdamState {
  long long step_count = 0;
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double lambda = 0.0;
  std::vector<int> decayed_layers;
  std::vector<Layer> m;  // first moments, network-shaped
  std::vector<Layer> v;  // second moments, network-shaped
};

AdamState new_state(const SirenNetwork& net, double lr, double lambda);

std::pair<SirenNetwork, AdamState> step(const SirenNetwork& net, const GradientSet& grads,
                                        const AdamState& state);

}  // namespace sirden
