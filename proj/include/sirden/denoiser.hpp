#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sirden/estimator.hpp"
#include "sirden/image.hpp"
#include "sirden/siren.hpp"

namespace sirden {

struct RunConfig {
  int hidden_layers = 6;
  int width = 0;  // 0 = auto via width_for
  double omega0 = 30.0;
  double omega_hidden = 30.0;
  double lr = 1e-4;
  double lambda = 0.001;
  int max_iters = 5000;
  int check_every = 10;  // criterion evaluation cadence
  int batch_size = 0;    // 0 = full batch
  uint64_t seed = 0;
  int threads = 1;
  std::optional<double> sigma_override;  // [0,1] scale; skips estimation
};

enum class StopReason { criterion_met, max_iters };

struct TrajectoryRow {
  int iter = 0;
  double train_mse = 0.0;  // per-element mean over all pixels and channels
  std::optional<double> threshold;
  bool stopped = false;
  std::vector<std::optional<double>> psnrs;  // one slot per trajectory label
};

struct RunTrajectory {
  std::vector<std::string> labels;  // psnr_<label> CSV columns, in order
  std::vector<TrajectoryRow> rows;
};

struct RunResult {
  Image denoised;
  int stop_iter = 0;
  StopReason stop_reason = StopReason::criterion_met;
  double stop_mse = 0.0;      // train MSE of the emitted parameters
  int emitted_iter = 0;       // equals stop_iter unless the max_iters
                              // fallback picked an earlier checkpoint
  bool stopped_at_start = false;  // criterion already met before any step
  NoiseEstimate estimate;
  double threshold = 0.0;
  SirenNetwork net;  // parameters of the emitted render
  std::vector<double> layer_weight_norms;  // Frobenius, at the final iterate
                                           // (comparable across equal-length runs)
  RunTrajectory trajectory;
  double seconds = 0.0;
};

// References a trajectory reports PSNR against; label becomes the CSV
// column suffix. Pointers are borrowed for the duration of the call.
using References = std::vector<std::pair<std::string, const Image*>>;

// Fits the network to the noisy image and stops the first time the
// per-element train MSE at a checkpoint falls to the estimated noise
// power sigma^2. If the criterion never fires, runs to max_iters and
// emits the checkpoint whose MSE came closest to the threshold from
// above. clean_ref only feeds the psnr_clean trajectory column.
RunResult denoise(const Image& noisy, const RunConfig& config,
                  const Image* clean_ref = nullptr);

// Instrumentation-only fit: no stopping, records train MSE and PSNR
// against every reference at each checkpoint.
RunTrajectory fit_trajectory(const Image& target, const RunConfig& config,
                             const References& references);

struct DecayArm {
  double lambda = 0.0;
  RunResult result;
  std::optional<double> psnr_clean;  // of the emitted image
};

struct DecayReport {
  DecayArm with_decay;
  DecayArm without_decay;
};

// Two denoise runs from the identical seed, config.lambda vs 0.
DecayReport compare_decay(const Image& noisy, const RunConfig& config,
                          const Image* clean_ref = nullptr);

void write_trajectory_csv(const RunTrajectory& traj, const std::string& path);

}  // namespace sirden
