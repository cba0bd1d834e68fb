// Command-line front end: every subcommand writes its primary output plus a
// JSON manifest that is sufficient to replay the run byte-for-byte.
#include <CLI11.hpp>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sirden/checkpoint.hpp"
#include "sirden/denoiser.hpp"
#include "sirden/errors.hpp"
#include "sirden/estimator.hpp"
#include "sirden/image.hpp"
#include "sirden/noise.hpp"
#include "sirden/png_io.hpp"
#include "sirden/rng.hpp"
#include "sirden/siren.hpp"

using nlohmann::json;

namespace {

std::string strip_suffix(const std::string& path, const std::string& suffix) {
  if (path.size() > suffix.size() &&
      path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return path.substr(0, path.size() - suffix.size());
  }
  return path;
}

std::string manifest_path_for(const std::string& out, const std::string& suffix) {
  return strip_suffix(out, suffix) + ".manifest.json";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw sirden::IoError("cannot open for writing: " + path);
  f << text;
  if (!f) throw sirden::IoError("write failed: " + path);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// PSNR can be infinite (identical images); JSON has no Inf literal.
json json_psnr(double v) {
  if (std::isinf(v)) return json("inf");
  return json(v);
}

json estimate_json(const sirden::NoiseEstimate& est, bool overridden) {
  json j;
  j["sigma_unit_scale"] = est.sigma;
  j["sigma_255_scale"] = est.sigma * 255.0;
  j["patch_size"] = est.patch_size;
  j["iterations_used"] = est.iterations_used;
  j["overridden"] = overridden;
  return j;
}

const char* stop_reason_name(sirden::StopReason r) {
  return r == sirden::StopReason::criterion_met ? "criterion_met" : "max_iters";
}

// Shared training flags (denoise / trajectory / compare-decay).
struct TrainFlags {
  std::string width = "auto";
  int layers = 6;
  double lr = 1e-4;
  double lambda = 0.001;
  int iters = 5000;
  int check_every = 10;
  int batch = 0;
  double omega0 = 30.0;
  double omega_hidden = 30.0;
  double sigma255 = -1.0;  // <0: estimate from the image
  uint64_t seed = 0;
  int threads = 0;  // 0: hardware concurrency
};

void add_train_flags(CLI::App* cmd, TrainFlags& f) {
  static const CLI::Validator width_check(
      [](std::string& s) -> std::string {
        if (s == "auto") return {};
        try {
          if (std::stoi(s) > 0) return {};
        } catch (...) {
        }
        return "must be a positive integer or 'auto'";
      },
      "WIDTH");
  cmd->add_option("--width", f.width, "Hidden width, or 'auto' for the resolution rule")
      ->check(width_check)
      ->capture_default_str();
  cmd->add_option("--layers", f.layers, "Hidden layer count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--lr", f.lr, "Adam learning rate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--lambda", f.lambda, "Selective weight decay coefficient")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--iters", f.iters, "Iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--check-every", f.check_every, "Stopping-criterion cadence")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--batch", f.batch, "Mini-batch size (0 = full grid)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--omega0", f.omega0, "First-layer frequency scale")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--omega-hidden", f.omega_hidden, "Hidden-layer frequency scale")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--sigma", f.sigma255,
                  "Known noise std on the 0-255 scale (skips estimation)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", f.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads (1 = bitwise deterministic)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

int parse_width(const std::string& w) {
  if (w == "auto") return 0;
  try {
    const int v = std::stoi(w);
    if (v > 0) return v;
  } catch (...) {
  }
  throw sirden::FormatError("--width must be a positive integer or 'auto'");
}

sirden::RunConfig run_config_from(const TrainFlags& f) {
  sirden::RunConfig cfg;
  cfg.hidden_layers = f.layers;
  cfg.width = parse_width(f.width);
  cfg.lr = f.lr;
  cfg.lambda = f.lambda;
  cfg.max_iters = f.iters;
  cfg.check_every = f.check_every;
  cfg.batch_size = f.batch;
  cfg.omega0 = f.omega0;
  cfg.omega_hidden = f.omega_hidden;
  cfg.seed = f.seed;
  cfg.threads = f.threads > 0 ? f.threads
                              : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (f.sigma255 >= 0.0) cfg.sigma_override = f.sigma255 / 255.0;
  return cfg;
}

// Replayable flag list: effective values for everything that shapes the run.
json train_argv(const char* sub, const TrainFlags& f, const sirden::RunConfig& cfg) {
  json argv = json::array();
  argv.push_back(sub);
  const auto add = [&argv](const char* flag, const std::string& v) {
    argv.push_back(flag);
    argv.push_back(v);
  };
  add("--width", f.width);
  add("--layers", std::to_string(f.layers));
  add("--lr", fmt_double(f.lr));
  add("--lambda", fmt_double(f.lambda));
  add("--iters", std::to_string(f.iters));
  add("--check-every", std::to_string(f.check_every));
  add("--batch", std::to_string(f.batch));
  add("--omega0", fmt_double(f.omega0));
  add("--omega-hidden", fmt_double(f.omega_hidden));
  if (f.sigma255 >= 0.0) add("--sigma", fmt_double(f.sigma255));
  add("--seed", std::to_string(f.seed));
  add("--threads", std::to_string(cfg.threads));
  return argv;
}

json config_json(const sirden::RunConfig& cfg, int resolved_width) {
  json j;
  j["hidden_layers"] = cfg.hidden_layers;
  j["width"] = resolved_width;
  j["width_auto"] = cfg.width == 0;
  j["lr"] = cfg.lr;
  j["lambda"] = cfg.lambda;
  j["max_iters"] = cfg.max_iters;
  j["check_every"] = cfg.check_every;
  j["batch_size"] = cfg.batch_size;
  j["omega0"] = cfg.omega0;
  j["omega_hidden"] = cfg.omega_hidden;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  return j;
}

json image_json(const sirden::Image& img) {
  return json{{"height", img.height}, {"width", img.width}, {"channels", img.channels}};
}

// ---------------------------------------------------------------- denoise

struct DenoiseFlags {
  std::string in, out, clean, save_checkpoint;
  TrainFlags train;
};

int run_denoise(const DenoiseFlags& f) {
  const sirden::Image noisy = sirden::load_png(f.in);
  std::optional<sirden::Image> clean;
  if (!f.clean.empty()) clean = sirden::load_png(f.clean);

  const sirden::RunConfig cfg = run_config_from(f.train);
  const sirden::RunResult res =
      sirden::denoise(noisy, cfg, clean ? &*clean : nullptr);

  const std::string base = strip_suffix(f.out, ".png");
  const std::string traj_path = base + ".trajectory.csv";
  sirden::save_png(res.denoised, f.out);
  sirden::write_trajectory_csv(res.trajectory, traj_path);
  if (!f.save_checkpoint.empty()) {
    sirden::save_checkpoint({res.net, noisy.height, noisy.width}, f.save_checkpoint);
  }

  json argv = train_argv("denoise", f.train, cfg);
  argv.push_back("--in");
  argv.push_back(f.in);
  argv.push_back("--out");
  argv.push_back(f.out);
  if (!f.clean.empty()) {
    argv.push_back("--clean");
    argv.push_back(f.clean);
  }
  if (!f.save_checkpoint.empty()) {
    argv.push_back("--save-checkpoint");
    argv.push_back(f.save_checkpoint);
  }

  json manifest;
  manifest["tool"] = "sirden";
  manifest["subcommand"] = "denoise";
  manifest["argv"] = std::move(argv);
  manifest["input"] = f.in;
  manifest["image"] = image_json(noisy);
  manifest["config"] = config_json(cfg, res.net.config.width);
  manifest["estimate"] = estimate_json(res.estimate, cfg.sigma_override.has_value());
  manifest["threshold"] = res.threshold;
  manifest["stop"] = {{"iter", res.stop_iter},
                      {"reason", stop_reason_name(res.stop_reason)},
                      {"train_mse", res.stop_mse},
                      {"emitted_iter", res.emitted_iter},
                      {"stopped_at_start", res.stopped_at_start}};
  manifest["layer_weight_norms"] = res.layer_weight_norms;
  manifest["outputs"] = {{"image", f.out}, {"trajectory", traj_path}};
  if (!f.save_checkpoint.empty()) manifest["outputs"]["checkpoint"] = f.save_checkpoint;
  write_text(manifest_path_for(f.out, ".png"), manifest.dump(2) + "\n");

  std::fprintf(stderr, "denoise: stop at iter %d (%s), train MSE %.6g vs threshold %.6g, %.2fs\n",
               res.stop_iter, stop_reason_name(res.stop_reason), res.stop_mse, res.threshold,
               res.seconds);
  return 0;
}

// ------------------------------------------------------------------ synth

struct SynthFlags {
  std::string in, out, kind = "gaussian";
  double sigma = -1.0;
  std::vector<double> sigma_range;
  double alpha = -1.0;
  std::vector<double> alpha_range;
  uint64_t seed = 0;
};

int run_synth(const SynthFlags& f) {
  const sirden::Image clean = sirden::load_png(f.in);

  sirden::NoiseSpec spec;
  spec.seed = f.seed;
  if (f.sigma >= 0.0) {
    spec.sigma_lo = spec.sigma_hi = f.sigma;
  } else if (!f.sigma_range.empty()) {
    spec.sigma_lo = f.sigma_range[0];
    spec.sigma_hi = f.sigma_range[1];
  } else {
    spec.sigma_lo = 0.0;  // sampling protocol default
    spec.sigma_hi = 25.0;
  }

  json manifest;
  manifest["tool"] = "sirden";
  manifest["subcommand"] = "synth";
  manifest["input"] = f.in;
  manifest["image"] = image_json(clean);
  manifest["kind"] = f.kind;
  manifest["seed"] = f.seed;
  manifest["sigma_range"] = {spec.sigma_lo, spec.sigma_hi};

  json argv = json::array();
  argv.push_back("synth");
  argv.push_back("--in");
  argv.push_back(f.in);
  argv.push_back("--out");
  argv.push_back(f.out);
  argv.push_back("--kind");
  argv.push_back(f.kind);
  argv.push_back("--sigma-range");
  argv.push_back(fmt_double(spec.sigma_lo));
  argv.push_back(fmt_double(spec.sigma_hi));

  if (f.kind == "gaussian") {
    spec.kind = sirden::NoiseKind::gaussian;
    const sirden::GaussianResult res = sirden::add_gaussian(clean, spec);
    sirden::save_png(res.noisy, f.out);
    manifest["sigma255"] = res.sigma255;
  } else {
    spec.kind = sirden::NoiseKind::poisson_gaussian;
    if (f.alpha >= 0.0) {
      spec.alpha_lo = spec.alpha_hi = f.alpha;
    } else if (!f.alpha_range.empty()) {
      spec.alpha_lo = f.alpha_range[0];
      spec.alpha_hi = f.alpha_range[1];
    }  // else keep the [50, 100] protocol default
    manifest["alpha_range"] = {spec.alpha_lo, spec.alpha_hi};
    argv.push_back("--alpha-range");
    argv.push_back(fmt_double(spec.alpha_lo));
    argv.push_back(fmt_double(spec.alpha_hi));
    const sirden::PoissonGaussianResult res = sirden::add_poisson_gaussian(clean, spec);
    sirden::save_png(res.noisy, f.out);
    manifest["sigma255"] = res.sigma255;
    manifest["alpha"] = res.alpha;
  }
  argv.push_back("--seed");
  argv.push_back(std::to_string(f.seed));
  manifest["argv"] = std::move(argv);
  manifest["outputs"] = {{"image", f.out}};
  write_text(manifest_path_for(f.out, ".png"), manifest.dump(2) + "\n");
  return 0;
}

// --------------------------------------------------------------- estimate

int run_estimate(const std::string& in, const std::string& out) {
  const sirden::Image img = sirden::load_png(in);
  const sirden::NoiseEstimate est = sirden::estimate_sigma(img);

  json j = estimate_json(est, false);
  j.erase("overridden");
  j["threshold"] = sirden::criterion_threshold(est);
  j["input"] = in;
  const std::string text = j.dump(2) + "\n";
  std::fputs(text.c_str(), stdout);
  if (!out.empty()) write_text(out, text);
  return 0;
}

// ------------------------------------------------------------------- eval

int run_eval(const std::string& test, const std::string& ref, const std::string& out) {
  const sirden::Image a = sirden::load_png(test);
  const sirden::Image b = sirden::load_png(ref);
  const double m = sirden::mse(a, b);

  json j;
  j["psnr_db"] = json_psnr(sirden::psnr(a, b));
  j["mse"] = m;
  const std::string text = j.dump(2) + "\n";
  std::fputs(text.c_str(), stdout);
  if (!out.empty()) write_text(out, text);
  return 0;
}

// ------------------------------------------------------------- trajectory

struct TrajectoryFlags {
  std::string in, out;
  std::vector<std::string> refs;  // label=path
  TrainFlags train;
};

int run_trajectory(const TrajectoryFlags& f) {
  const sirden::Image target = sirden::load_png(f.in);

  std::deque<sirden::Image> ref_images;
  sirden::References refs;
  for (const std::string& spec : f.refs) {
    const size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw sirden::FormatError("--ref expects label=path, got: " + spec);
    }
    ref_images.push_back(sirden::load_png(spec.substr(eq + 1)));
    refs.emplace_back(spec.substr(0, eq), &ref_images.back());
  }

  const sirden::RunConfig cfg = run_config_from(f.train);
  const sirden::RunTrajectory traj = sirden::fit_trajectory(target, cfg, refs);
  sirden::write_trajectory_csv(traj, f.out);

  json argv = train_argv("trajectory", f.train, cfg);
  argv.push_back("--in");
  argv.push_back(f.in);
  argv.push_back("--out");
  argv.push_back(f.out);
  for (const std::string& spec : f.refs) {
    argv.push_back("--ref");
    argv.push_back(spec);
  }

  json manifest;
  manifest["tool"] = "sirden";
  manifest["subcommand"] = "trajectory";
  manifest["argv"] = std::move(argv);
  manifest["input"] = f.in;
  manifest["image"] = image_json(target);
  manifest["config"] = config_json(cfg, cfg.width > 0
                                            ? cfg.width
                                            : sirden::width_for(target.height, target.width));
  manifest["references"] = f.refs;
  manifest["rows"] = traj.rows.size();
  manifest["outputs"] = {{"trajectory", f.out}};
  write_text(manifest_path_for(f.out, ".csv"), manifest.dump(2) + "\n");
  return 0;
}

// --------------------------------------------------------------- features

struct FeatureFlags {
  std::string checkpoint, out;
  int per_layer = 8;
  int height = 0;
  int width = 0;
  uint64_t seed = 0;
};

int run_features(const FeatureFlags& f) {
  const sirden::Checkpoint ck = sirden::load_checkpoint(f.checkpoint);
  const int height = f.height > 0 ? f.height : ck.trained_height;
  const int width = f.width > 0 ? f.width : ck.trained_width;
  if (height <= 0 || width <= 0) {
    throw sirden::FormatError("checkpoint lacks a trained size; pass --height and --width");
  }

  const int layers = ck.net.config.hidden_layers;
  const int per = std::min(f.per_layer, ck.net.config.width);
  if (per <= 0) throw sirden::FormatError("--per-layer must be positive");

  // Seeded distinct neuron sample per layer (partial Fisher-Yates).
  sirden::RandomEngine rng(f.seed);
  std::vector<std::vector<int>> picks(layers);
  for (int l = 0; l < layers; ++l) {
    std::vector<int> idx(ck.net.config.width);
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    for (int i = 0; i < per; ++i) {
      const int j = i + static_cast<int>(rng.uniform01() * (idx.size() - i));
      std::swap(idx[i], idx[std::min(j, static_cast<int>(idx.size()) - 1)]);
    }
    picks[l].assign(idx.begin(), idx.begin() + per);
  }

  sirden::Image sheet;
  sheet.height = layers * height;
  sheet.width = per * width;
  sheet.channels = 1;
  sheet.data.assign(static_cast<size_t>(sheet.height) * sheet.width, 0.0);
  for (int l = 0; l < layers; ++l) {
    for (int j = 0; j < per; ++j) {
      const sirden::FeatureMap fm =
          sirden::neuron_feature(ck.net, l, picks[l][j], height, width);
      for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
          sheet.at(l * height + r, j * width + c, 0) = fm.values.at(r, c, 0);
        }
      }
    }
  }
  sirden::save_png(sheet, f.out);

  json manifest;
  manifest["tool"] = "sirden";
  manifest["subcommand"] = "features";
  manifest["argv"] = {"features",    "--checkpoint",           f.checkpoint,
                      "--out",       f.out,                    "--per-layer",
                      std::to_string(f.per_layer),             "--height",
                      std::to_string(f.height),                "--width",
                      std::to_string(f.width),                 "--seed",
                      std::to_string(f.seed)};
  manifest["checkpoint"] = f.checkpoint;
  manifest["render"] = {{"height", height}, {"width", width}};
  manifest["neurons"] = picks;
  manifest["outputs"] = {{"image", f.out}};
  write_text(manifest_path_for(f.out, ".png"), manifest.dump(2) + "\n");
  return 0;
}

// ----------------------------------------------------------- compare-decay

struct CompareFlags {
  std::string in, out, clean, out_decay, out_plain;
  TrainFlags train;
};

json arm_json(const sirden::DecayArm& arm) {
  json j;
  j["lambda"] = arm.lambda;
  j["stop_iter"] = arm.result.stop_iter;
  j["stop_reason"] = stop_reason_name(arm.result.stop_reason);
  j["train_mse"] = arm.result.stop_mse;
  j["layer_weight_norms"] = arm.result.layer_weight_norms;
  if (arm.psnr_clean) j["psnr_clean"] = json_psnr(*arm.psnr_clean);
  return j;
}

int run_compare_decay(const CompareFlags& f) {
  const sirden::Image noisy = sirden::load_png(f.in);
  std::optional<sirden::Image> clean;
  if (!f.clean.empty()) clean = sirden::load_png(f.clean);

  const sirden::RunConfig cfg = run_config_from(f.train);
  const sirden::DecayReport rep =
      sirden::compare_decay(noisy, cfg, clean ? &*clean : nullptr);

  if (!f.out_decay.empty()) sirden::save_png(rep.with_decay.result.denoised, f.out_decay);
  if (!f.out_plain.empty()) sirden::save_png(rep.without_decay.result.denoised, f.out_plain);

  json argv = train_argv("compare-decay", f.train, cfg);
  argv.push_back("--in");
  argv.push_back(f.in);
  argv.push_back("--out");
  argv.push_back(f.out);
  if (!f.clean.empty()) {
    argv.push_back("--clean");
    argv.push_back(f.clean);
  }
  if (!f.out_decay.empty()) {
    argv.push_back("--out-decay");
    argv.push_back(f.out_decay);
  }
  if (!f.out_plain.empty()) {
    argv.push_back("--out-plain");
    argv.push_back(f.out_plain);
  }

  json report;
  report["tool"] = "sirden";
  report["subcommand"] = "compare-decay";
  report["argv"] = std::move(argv);
  report["input"] = f.in;
  report["image"] = image_json(noisy);
  report["config"] = config_json(cfg, rep.with_decay.result.net.config.width);
  report["estimate"] =
      estimate_json(rep.with_decay.result.estimate, cfg.sigma_override.has_value());
  report["threshold"] = rep.with_decay.result.threshold;
  report["with_decay"] = arm_json(rep.with_decay);
  report["without_decay"] = arm_json(rep.without_decay);
  json outputs = {{"report", f.out}};
  if (!f.out_decay.empty()) outputs["image_with_decay"] = f.out_decay;
  if (!f.out_plain.empty()) outputs["image_without_decay"] = f.out_plain;
  report["outputs"] = outputs;

  const std::string text = report.dump(2) + "\n";
  write_text(f.out, text);
  write_text(manifest_path_for(f.out, ".json"), text);

  std::fprintf(stderr, "compare-decay: %.2fs + %.2fs\n", rep.with_decay.result.seconds,
               rep.without_decay.result.seconds);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-shot single-image denoiser built on a sinusoidal coordinate MLP"};
  app.require_subcommand(1);

  DenoiseFlags den;
  CLI::App* den_cmd = app.add_subcommand("denoise", "Fit the noisy image and stop at the noise floor");
  den_cmd->add_option("--in", den.in, "Noisy input PNG")->required();
  den_cmd->add_option("--out", den.out, "Denoised output PNG")->required();
  den_cmd->add_option("--clean", den.clean, "Clean reference (trajectory PSNR column only)");
  den_cmd->add_option("--save-checkpoint", den.save_checkpoint, "Write network checkpoint JSON");
  add_train_flags(den_cmd, den.train);

  SynthFlags syn;
  CLI::App* syn_cmd = app.add_subcommand("synth", "Contaminate a clean image");
  syn_cmd->add_option("--in", syn.in, "Clean input PNG")->required();
  syn_cmd->add_option("--out", syn.out, "Noisy output PNG")->required();
  syn_cmd->add_option("--kind", syn.kind, "Noise model")
      ->check(CLI::IsMember({"gaussian", "poisson-gaussian"}))
      ->capture_default_str();
  auto* syn_sigma = syn_cmd->add_option("--sigma", syn.sigma, "Fixed sigma, 0-255 scale")
                        ->check(CLI::NonNegativeNumber);
  syn_cmd->add_option("--sigma-range", syn.sigma_range, "Uniform sigma draw range, 0-255 scale")
      ->expected(2)
      ->excludes(syn_sigma);
  auto* syn_alpha = syn_cmd->add_option("--alpha", syn.alpha, "Fixed Poisson scale")
                        ->check(CLI::PositiveNumber);
  syn_cmd->add_option("--alpha-range", syn.alpha_range, "Uniform alpha draw range")
      ->expected(2)
      ->excludes(syn_alpha);
  syn_cmd->add_option("--seed", syn.seed, "RNG seed")->capture_default_str();

  std::string est_in, est_out;
  CLI::App* est_cmd = app.add_subcommand("estimate", "Blind noise-level estimate");
  est_cmd->add_option("--in", est_in, "Input PNG")->required();
  est_cmd->add_option("--out", est_out, "Also write the JSON report here");

  std::string eval_test, eval_ref, eval_out;
  CLI::App* eval_cmd = app.add_subcommand("eval", "PSNR/MSE between two images");
  eval_cmd->add_option("--test", eval_test, "Image under test")->required();
  eval_cmd->add_option("--ref", eval_ref, "Reference image")->required();
  eval_cmd->add_option("--out", eval_out, "Also write the JSON report here");

  TrajectoryFlags trj;
  CLI::App* trj_cmd = app.add_subcommand("trajectory", "Fit without stopping, log MSE/PSNR curves");
  trj_cmd->add_option("--in", trj.in, "Target PNG")->required();
  trj_cmd->add_option("--out", trj.out, "Trajectory CSV path")->required();
  trj_cmd->add_option("--ref", trj.refs, "label=path reference for a psnr_<label> column");
  add_train_flags(trj_cmd, trj.train);

  FeatureFlags fea;
  CLI::App* fea_cmd = app.add_subcommand("features", "Render neuron activation maps from a checkpoint");
  fea_cmd->add_option("--checkpoint", fea.checkpoint, "Checkpoint JSON")->required();
  fea_cmd->add_option("--out", fea.out, "Contact-sheet PNG")->required();
  fea_cmd->add_option("--per-layer", fea.per_layer, "Neurons sampled per layer")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fea_cmd->add_option("--height", fea.height, "Render height (default: trained size)");
  fea_cmd->add_option("--width", fea.width, "Render width (default: trained size)");
  fea_cmd->add_option("--seed", fea.seed, "Neuron sampling seed")->capture_default_str();

  CompareFlags cmp;
  CLI::App* cmp_cmd = app.add_subcommand("compare-decay", "Identical runs with and without decay");
  cmp_cmd->add_option("--in", cmp.in, "Noisy input PNG")->required();
  cmp_cmd->add_option("--out", cmp.out, "Report JSON path")->required();
  cmp_cmd->add_option("--clean", cmp.clean, "Clean reference for output PSNR");
  cmp_cmd->add_option("--out-decay", cmp.out_decay, "Optional PNG of the decayed arm");
  cmp_cmd->add_option("--out-plain", cmp.out_plain, "Optional PNG of the plain arm");
  add_train_flags(cmp_cmd, cmp.train);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(den_cmd)) return run_denoise(den);
    if (app.got_subcommand(syn_cmd)) return run_synth(syn);
    if (app.got_subcommand(est_cmd)) return run_estimate(est_in, est_out);
    if (app.got_subcommand(eval_cmd)) return run_eval(eval_test, eval_ref, eval_out);
    if (app.got_subcommand(trj_cmd)) return run_trajectory(trj);
    if (app.got_subcommand(fea_cmd)) return run_features(fea);
    if (app.got_subcommand(cmp_cmd)) return run_compare_decay(cmp);
  } catch (const sirden::NonFiniteOutput& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 4;
  } catch (const sirden::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}
