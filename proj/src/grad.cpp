#include "sirden/grad.hpp"

#include <cmath>
#include <thread>

#include "fastmath.hpp"
#include "sirden/errors.hpp"

namespace sirden {

namespace {

constexpr Eigen::Index kBlockRows = 8192;

GradientSet zero_grads(const SirenNetwork& net) {
  GradientSet g;
  g.layers.resize(net.layers.size());
  for (size_t l = 0; l < net.layers.size(); ++l) {
    g.layers[l].weight = Eigen::MatrixXd::Zero(net.layers[l].weight.rows(),
                                               net.layers[l].weight.cols());
    g.layers[l].bias = Eigen::VectorXd::Zero(net.layers[l].bias.size());
  }
  return g;
}

// Reused across iterations; Eigen resize() is a no-op once shapes settle,
// so the multi-megabyte activation buffers are allocated only once per
// thread instead of every optimizer step.
struct Workspace {
  std::vector<Eigen::MatrixXd> act;   // post-sine activations
  std::vector<Eigen::MatrixXd> dact;  // omega * cos(omega z)
  Eigen::MatrixXd input, z, resid, da, dz;
};

Workspace& local_workspace() {
  thread_local Workspace ws;
  return ws;
}

// Forward + backward over rows [lo, lo+len), accumulating into acc/loss_acc.
// Residuals are scaled by 2/n_total so per-range contributions sum to the
// gradient of the mean loss.
void accumulate_range(const SirenNetwork& net, const Batch& batch, Eigen::Index lo,
                      Eigen::Index len, Eigen::Index n_total, GradientSet& acc,
                      double& loss_acc) {
  const int L = net.config.hidden_layers;
  Workspace& ws = local_workspace();
  ws.act.resize(L);
  ws.dact.resize(L);

  for (Eigen::Index b0 = lo; b0 < lo + len; b0 += kBlockRows) {
    const Eigen::Index n = std::min(kBlockRows, lo + len - b0);
    ws.input = 2.0 * batch.coords.middleRows(b0, n).array() - 1.0;

    const Eigen::MatrixXd* prev = &ws.input;
    for (int l = 0; l < L; ++l) {
      const Layer& layer = net.layers[l];
      ws.z.resize(n, layer.weight.rows());
      ws.z.noalias() = *prev * layer.weight.transpose();
      ws.z.rowwise() += layer.bias.transpose();
      const double omega = l == 0 ? net.config.omega0 : net.config.omega_hidden;
      ws.z *= omega;
      ws.act[l].resize(n, ws.z.cols());
      ws.dact[l].resize(n, ws.z.cols());
      fastmath::sincos_array(ws.z.data(), ws.act[l].data(), ws.dact[l].data(), ws.z.size());
      ws.dact[l] *= omega;
      prev = &ws.act[l];
    }
    const Layer& last = net.layers[L];
    ws.resid.resize(n, last.weight.rows());
    ws.resid.noalias() = *prev * last.weight.transpose();
    ws.resid.rowwise() += last.bias.transpose();
    ws.resid -= batch.targets.middleRows(b0, n);

    loss_acc += ws.resid.squaredNorm();

    ws.resid *= 2.0 / static_cast<double>(n_total);  // now dL/dy
    acc.layers[L].weight.noalias() += ws.resid.transpose() * *prev;
    acc.layers[L].bias += ws.resid.colwise().sum();

    ws.da.resize(n, last.weight.cols());
    ws.da.noalias() = ws.resid * last.weight;
    for (int l = L - 1; l >= 0; --l) {
      ws.dz = ws.da.array() * ws.dact[l].array();
      const Eigen::MatrixXd& below = l > 0 ? ws.act[l - 1] : ws.input;
      acc.layers[l].weight.noalias() += ws.dz.transpose() * below;
      acc.layers[l].bias += ws.dz.colwise().sum();
      if (l > 0) {
        ws.da.resize(n, net.layers[l].weight.cols());
        ws.da.noalias() = ws.dz * net.layers[l].weight;
      }
    }
  }
}

void check_consistent(const SirenNetwork& net, const Batch& batch) {
  if (batch.coords.rows() == 0) throw Error("loss_and_grad: empty batch");
  if (batch.coords.rows() != batch.targets.rows()) {
    throw ShapeMismatch("batch coords and targets differ in length");
  }
  if (batch.targets.cols() != net.config.out_dim) {
    throw ShapeMismatch("batch target channels do not match network out_dim");
  }
}

}  // namespace

Batch full_batch(const CoordGrid& grid, const Image& img) {
  if (grid.height != img.height || grid.width != img.width) {
    throw ShapeMismatch("grid and image dimensions differ");
  }
  Batch batch;
  batch.coords = grid.coords;
  batch.targets.resize(grid.coords.rows(), img.channels);
  for (Eigen::Index i = 0; i < batch.targets.rows(); ++i) {
    for (int k = 0; k < img.channels; ++k) {
      batch.targets(i, k) = img.data[i * img.channels + k];
    }
  }
  return batch;
}

Batch index_batch(const CoordGrid& grid, const Image& img, const std::vector<int>& rows) {
  if (grid.height != img.height || grid.width != img.width) {
    throw ShapeMismatch("grid and image dimensions differ");
  }
  Batch batch;
  batch.coords.resize(static_cast<Eigen::Index>(rows.size()), 2);
  batch.targets.resize(static_cast<Eigen::Index>(rows.size()), img.channels);
  for (size_t i = 0; i < rows.size(); ++i) {
    const int r = rows[i];
    if (r < 0 || r >= grid.coords.rows()) throw IndexOutOfRange("batch row outside grid");
    batch.coords.row(static_cast<Eigen::Index>(i)) = grid.coords.row(r);
    for (int k = 0; k < img.channels; ++k) {
      batch.targets(static_cast<Eigen::Index>(i), k) = img.data[static_cast<size_t>(r) * img.channels + k];
    }
  }
  return batch;
}

std::pair<double, GradientSet> loss_and_grad(const SirenNetwork& net, const Batch& batch,
                                             int threads) {
  check_consistent(net, batch);
  const Eigen::Index n = batch.coords.rows();
  threads = std::max(1, threads);

  GradientSet total = zero_grads(net);
  double loss_sum = 0.0;
  if (threads == 1 || n < 4096) {
    accumulate_range(net, batch, 0, n, n, total, loss_sum);
  } else {
    std::vector<GradientSet> partial(threads);
    std::vector<double> partial_loss(threads, 0.0);
    std::vector<std::thread> pool;
    const Eigen::Index chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const Eigen::Index lo = static_cast<Eigen::Index>(t) * chunk;
      if (lo >= n) break;
      const Eigen::Index len = std::min<Eigen::Index>(chunk, n - lo);
      partial[t] = zero_grads(net);
      pool.emplace_back([&, t, lo, len] {
        accumulate_range(net, batch, lo, len, n, partial[t], partial_loss[t]);
      });
    }
    for (auto& th : pool) th.join();
    // Fixed-order reduction keeps results reproducible for a given thread count.
    for (int t = 0; t < threads; ++t) {
      if (partial[t].layers.empty()) continue;
      loss_sum += partial_loss[t];
      for (size_t l = 0; l < total.layers.size(); ++l) {
        total.layers[l].weight += partial[t].layers[l].weight;
        total.layers[l].bias += partial[t].layers[l].bias;
      }
    }
  }

  const double loss = loss_sum / static_cast<double>(n);
  if (!std::isfinite(loss)) throw NonFiniteOutput("loss is NaN/Inf");
  for (const Layer& l : total.layers) {
    if (!l.weight.allFinite() || !l.bias.allFinite()) {
      throw NonFiniteOutput("gradient contains NaN/Inf");
    }
  }
  return {loss, std::move(total)};
}

double loss_value(const SirenNetwork& net, const Batch& batch, int threads) {
  check_consistent(net, batch);
  const Eigen::Index n = batch.coords.rows();
  Eigen::MatrixXd out(n, net.config.out_dim);
  threads = std::max(1, threads);
  if (threads == 1 || n < 4096) {
    detail::eval_block(net, batch.coords, out);
  } else {
    std::vector<std::thread> pool;
    const Eigen::Index chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const Eigen::Index lo = static_cast<Eigen::Index>(t) * chunk;
      if (lo >= n) break;
      const Eigen::Index len = std::min<Eigen::Index>(chunk, n - lo);
      pool.emplace_back([&, lo, len] {
        detail::eval_block(net, batch.coords.middleRows(lo, len), out.middleRows(lo, len));
      });
    }
    for (auto& th : pool) th.join();
  }
  const double loss = (out - batch.targets).squaredNorm() / static_cast<double>(n);
  if (!std::isfinite(loss)) throw NonFiniteOutput("loss is NaN/Inf");
  return loss;
}

GradientSet finite_diff_grad(const SirenNetwork& net, const Batch& batch, double step) {
  if (step <= 0.0) throw Error("finite_diff_grad: step must be positive");
  SirenNetwork probe = net;
  GradientSet g;
  g.layers.resize(net.layers.size());
  for (size_t l = 0; l < net.layers.size(); ++l) {
    g.layers[l].weight.resizeLike(net.layers[l].weight);
    g.layers[l].bias.resizeLike(net.layers[l].bias);
    for (Eigen::Index i = 0; i < net.layers[l].weight.size(); ++i) {
      double& p = probe.layers[l].weight.data()[i];
      const double saved = p;
      p = saved + step;
      const double up = loss_value(probe, batch);
      p = saved - step;
      const double dn = loss_value(probe, batch);
      p = saved;
      g.layers[l].weight.data()[i] = (up - dn) / (2.0 * step);
    }
    for (Eigen::Index i = 0; i < net.layers[l].bias.size(); ++i) {
      double& p = probe.layers[l].bias(i);
      const double saved = p;
      p = saved + step;
      const double up = loss_value(probe, batch);
      p = saved - step;
      const double dn = loss_value(probe, batch);
      p = saved;
      g.layers[l].bias(i) = (up - dn) / (2.0 * step);
    }
  }
  return g;
}

}  // namespace sirden
