#include "sirden/denoiser.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <tuple>

#include "sirden/adam.hpp"
#include "sirden/errors.hpp"
#include "sirden/grad.hpp"
#include "sirden/rng.hpp"

namespace sirden {

namespace {

void check_config(const RunConfig& cfg) {
  if (cfg.max_iters < 1) throw FormatError("max_iters must be >= 1");
  if (cfg.check_every < 1) throw FormatError("check_every must be >= 1");
  if (cfg.lambda < 0.0) throw FormatError("lambda must be >= 0");
  if (cfg.sigma_override && *cfg.sigma_override < 0.0) {
    throw FormatError("sigma override must be >= 0");
  }
}

SirenConfig siren_config_for(const Image& img, const RunConfig& cfg) {
  SirenConfig s;
  s.hidden_layers = cfg.hidden_layers;
  s.width = cfg.width > 0 ? cfg.width : width_for(img.height, img.width);
  s.in_dim = 2;
  s.out_dim = img.channels;
  s.omega0 = cfg.omega0;
  s.omega_hidden = cfg.omega_hidden;
  return s;
}

Image clamp_to_image(const Eigen::MatrixXd& pred, int height, int width) {
  Image img;
  img.height = height;
  img.width = width;
  img.channels = static_cast<int>(pred.cols());
  img.data.resize(static_cast<size_t>(pred.size()));
  for (Eigen::Index i = 0; i < pred.rows(); ++i) {
    for (Eigen::Index c = 0; c < pred.cols(); ++c) {
      img.data[static_cast<size_t>(i) * pred.cols() + c] = std::clamp(pred(i, c), 0.0, 1.0);
    }
  }
  return img;
}

struct CheckpointEval {
  double train_mse = 0.0;  // per-element mean
  Image render;
};

CheckpointEval eval_checkpoint(const SirenNetwork& net, const CoordGrid& grid,
                               const Batch& full, int threads) {
  const Eigen::MatrixXd pred = forward(net, grid, threads);
  CheckpointEval ev;
  ev.train_mse = (pred - full.targets).squaredNorm() / static_cast<double>(pred.size());
  ev.render = clamp_to_image(pred, grid.height, grid.width);
  return ev;
}

std::vector<double> weight_norms(const SirenNetwork& net) {
  std::vector<double> norms;
  norms.reserve(net.layers.size());
  for (const Layer& l : net.layers) norms.push_back(l.weight.norm());
  return norms;
}

std::vector<int> sample_rows(RandomEngine& rng, int n, int k) {
  std::vector<int> rows(k);
  for (int i = 0; i < k; ++i) {
    rows[i] = std::min(n - 1, static_cast<int>(rng.uniform01() * n));
  }
  return rows;
}

[[noreturn]] void rethrow_at_iteration(const NonFiniteOutput& e, int iter) {
  throw NonFiniteOutput(std::string(e.what()) + " (iteration " + std::to_string(iter) + ")");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

RunResult denoise(const Image& noisy, const RunConfig& config, const Image* clean_ref) {
  check_config(config);
  const auto t0 = std::chrono::steady_clock::now();

  RunResult res;
  if (config.sigma_override) {
    res.estimate.sigma = *config.sigma_override;
    res.estimate.iterations_used = 0;
    res.estimate.channel_sigma.assign(static_cast<size_t>(noisy.channels),
                                      *config.sigma_override);
  } else {
    res.estimate = estimate_sigma(noisy);
  }
  res.threshold = criterion_threshold(res.estimate);

  const CoordGrid grid = make_grid(noisy.height, noisy.width);
  const Batch full = full_batch(grid, noisy);
  const int n = noisy.height * noisy.width;

  SirenNetwork net = init(siren_config_for(noisy, config), config.seed);
  AdamState adam = new_state(net, config.lr, config.lambda);
  // Separate stream so full-batch runs consume no sampling randomness.
  RandomEngine batch_rng(config.seed + 0x9e3779b97f4a7c15ULL);
  const bool mini = config.batch_size > 0 && config.batch_size < n;

  RunTrajectory traj;
  traj.labels = {"clean", "noisy"};

  // Fallback snapshot: lowest train MSE seen, i.e. closest above the
  // threshold if the criterion never fires.
  double best_mse = std::numeric_limits<double>::infinity();
  int best_iter = 0;
  Image best_render;
  SirenNetwork best_net;

  bool fired = false;
  int iter = 0;
  const auto record = [&](int it) {
    CheckpointEval ev = eval_checkpoint(net, grid, full, config.threads);
    TrajectoryRow row;
    row.iter = it;
    row.train_mse = ev.train_mse;
    row.threshold = res.threshold;
    row.psnrs.resize(2);
    if (clean_ref) row.psnrs[0] = psnr(ev.render, *clean_ref);
    row.psnrs[1] = psnr(ev.render, noisy);
    row.stopped = ev.train_mse <= res.threshold;
    const bool stop = row.stopped;
    traj.rows.push_back(std::move(row));
    if (stop) {
      res.denoised = std::move(ev.render);
      res.stop_mse = ev.train_mse;
      res.stop_iter = it;
      res.emitted_iter = it;
      res.net = net;
      fired = true;
    } else if (ev.train_mse < best_mse) {
      best_mse = ev.train_mse;
      best_iter = it;
      best_render = std::move(ev.render);
      best_net = net;
    }
  };

  try {
    record(0);
    res.stopped_at_start = fired;
    while (!fired && iter < config.max_iters) {
      GradientSet grads;
      if (mini) {
        const Batch b = index_batch(grid, noisy, sample_rows(batch_rng, n, config.batch_size));
        grads = loss_and_grad(net, b, config.threads).second;
      } else {
        grads = loss_and_grad(net, full, config.threads).second;
      }
      std::tie(net, adam) = step(net, grads, adam);
      ++iter;
      if (iter % config.check_every == 0 || iter == config.max_iters) record(iter);
    }
  } catch (const NonFiniteOutput& e) {
    rethrow_at_iteration(e, iter);
  }

  res.layer_weight_norms = weight_norms(fired ? res.net : net);
  if (!fired) {
    res.stop_reason = StopReason::max_iters;
    res.stop_iter = config.max_iters;
    res.emitted_iter = best_iter;
    res.stop_mse = best_mse;
    res.denoised = std::move(best_render);
    res.net = std::move(best_net);
  } else {
    res.stop_reason = StopReason::criterion_met;
  }
  res.trajectory = std::move(traj);
  res.seconds = seconds_since(t0);
  return res;
}

RunTrajectory fit_trajectory(const Image& target, const RunConfig& config,
                             const References& references) {
  check_config(config);
  for (const auto& [label, img] : references) {
    if (img->height != target.height || img->width != target.width ||
        img->channels != target.channels) {
      throw ShapeMismatch("reference '" + label + "' does not match target dimensions");
    }
  }

  const CoordGrid grid = make_grid(target.height, target.width);
  const Batch full = full_batch(grid, target);
  const int n = target.height * target.width;

  SirenNetwork net = init(siren_config_for(target, config), config.seed);
  AdamState adam = new_state(net, config.lr, config.lambda);
  RandomEngine batch_rng(config.seed + 0x9e3779b97f4a7c15ULL);
  const bool mini = config.batch_size > 0 && config.batch_size < n;

  RunTrajectory traj;
  for (const auto& [label, img] : references) {
    (void)img;
    traj.labels.push_back(label);
  }

  const auto record = [&](int it) {
    CheckpointEval ev = eval_checkpoint(net, grid, full, config.threads);
    TrajectoryRow row;
    row.iter = it;
    row.train_mse = ev.train_mse;
    for (const auto& [label, img] : references) {
      (void)label;
      row.psnrs.push_back(psnr(ev.render, *img));
    }
    traj.rows.push_back(std::move(row));
  };

  int iter = 0;
  try {
    record(0);
    while (iter < config.max_iters) {
      GradientSet grads;
      if (mini) {
        const Batch b = index_batch(grid, target, sample_rows(batch_rng, n, config.batch_size));
        grads = loss_and_grad(net, b, config.threads).second;
      } else {
        grads = loss_and_grad(net, full, config.threads).second;
      }
      std::tie(net, adam) = step(net, grads, adam);
      ++iter;
      if (iter % config.check_every == 0 || iter == config.max_iters) record(iter);
    }
  } catch (const NonFiniteOutput& e) {
    rethrow_at_iteration(e, iter);
  }
  return traj;
}

DecayReport compare_decay(const Image& noisy, const RunConfig& config, const Image* clean_ref) {
  DecayReport rep;
  rep.with_decay.lambda = config.lambda;
  rep.with_decay.result = denoise(noisy, config, clean_ref);

  RunConfig plain = config;
  plain.lambda = 0.0;
  rep.without_decay.lambda = 0.0;
  rep.without_decay.result = denoise(noisy, plain, clean_ref);

  if (clean_ref) {
    rep.with_decay.psnr_clean = psnr(rep.with_decay.result.denoised, *clean_ref);
    rep.without_decay.psnr_clean = psnr(rep.without_decay.result.denoised, *clean_ref);
  }
  return rep;
}

void write_trajectory_csv(const RunTrajectory& traj, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);

  out << "iter,train_mse,threshold,stopped";
  for (const std::string& label : traj.labels) out << ",psnr_" << label;
  out << "\n";

  char buf[64];
  const auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const TrajectoryRow& row : traj.rows) {
    out << row.iter << ',' << fmt(row.train_mse) << ',';
    if (row.threshold) out << fmt(*row.threshold);
    out << ',' << (row.stopped ? 1 : 0);
    for (const std::optional<double>& p : row.psnrs) {
      out << ',';
      if (p) out << fmt(*p);
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace sirden
