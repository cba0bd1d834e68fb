#include "sirden/adam.hpp"

#include <cmath>

#include "sirden/errors.hpp"

namespace sirden {

AdamState new_state(const SirenNetwork& net, double lr, double lambda) {
  if (lr <= 0.0) throw Error("new_state: lr must be positive");
  if (lambda < 0.0) throw Error("new_state: lambda must be non-negative");
  AdamState st;
  st.lr = lr;
  st.lambda = lambda;
  const int last = static_cast<int>(net.layers.size()) - 1;
  st.decayed_layers = {last - 1, last};
  st.m.resize(net.layers.size());
  st.v.resize(net.layers.size());
  for (size_t l = 0; l < net.layers.size(); ++l) {
    st.m[l].weight = Eigen::MatrixXd::Zero(net.layers[l].weight.rows(), net.layers[l].weight.cols());
    st.m[l].bias = Eigen::VectorXd::Zero(net.layers[l].bias.size());
    st.v[l].weight = st.m[l].weight;
    st.v[l].bias = st.m[l].bias;
  }
  return st;
}

std::pair<SirenNetwork, AdamState> step(const SirenNetwork& net, const GradientSet& grads,
                                        const AdamState& state) {
  if (grads.layers.size() != net.layers.size()) {
    throw ShapeMismatch("gradient layer count does not match network");
  }
  SirenNetwork next_net = net;
  AdamState next = state;
  next.step_count = state.step_count + 1;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(next.step_count));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(next.step_count));

  auto update = [&](Eigen::Ref<Eigen::MatrixXd> p, const Eigen::MatrixXd& g,
                    Eigen::Ref<Eigen::MatrixXd> m, Eigen::Ref<Eigen::MatrixXd> v) {
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v.array().matrix() + (1.0 - state.beta2) * g.array().square().matrix();
    p.array() -= next.lr * (m.array() / c1) / ((v.array() / c2).sqrt() + state.eps);
  };

  for (size_t l = 0; l < net.layers.size(); ++l) {
    update(next_net.layers[l].weight, grads.layers[l].weight, next.m[l].weight, next.v[l].weight);
    Eigen::MatrixXd gb = grads.layers[l].bias;
    Eigen::Map<Eigen::MatrixXd> pb(next_net.layers[l].bias.data(), next_net.layers[l].bias.size(), 1);
    Eigen::Map<Eigen::MatrixXd> mb(next.m[l].bias.data(), next.m[l].bias.size(), 1);
    Eigen::Map<Eigen::MatrixXd> vb(next.v[l].bias.data(), next.v[l].bias.size(), 1);
    update(pb, gb, mb, vb);
  }
  if (next.lambda > 0.0) {
    const double factor = 1.0 - next.lr * next.lambda;
    for (int l : next.decayed_layers) {
      next_net.layers[l].weight *= factor;
    }
  }
  for (const Layer& l : next_net.layers) {
    if (!l.weight.allFinite() || !l.bias.allFinite()) {
      throw NonFiniteOutput("Adam step produced NaN/Inf parameters");
    }
  }
  return {std::move(next_net), std::move(next)};
}

}  // namespace sirden
