#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sirden/errors.hpp"
#include "sirden/grad.hpp"
#include "sirden/rng.hpp"
#include "sirden/siren.hpp"
#include "support.hpp"

using sirden::Batch;
using sirden::CoordGrid;
using sirden::GradientSet;
using sirden::Image;
using sirden::SirenConfig;
using sirden::SirenNetwork;

namespace {

Batch random_batch(int n, int out_dim, uint64_t seed) {
  sirden::RandomEngine rng(seed);
  Batch b;
  b.coords.resize(n, 2);
  b.targets.resize(n, out_dim);
  for (int i = 0; i < n; ++i) {
    b.coords(i, 0) = rng.uniform01();
    b.coords(i, 1) = rng.uniform01();
    for (int k = 0; k < out_dim; ++k) b.targets(i, k) = rng.uniform01();
  }
  return b;
}

// Largest |analytic - fd| scaled by max(1, |fd|), over every parameter.
double max_rel_err(const GradientSet& g, const GradientSet& fd) {
  double worst = 0.0;
  for (size_t l = 0; l < g.layers.size(); ++l) {
    const Eigen::MatrixXd dw =
        (g.layers[l].weight - fd.layers[l].weight).cwiseAbs().cwiseQuotient(
            fd.layers[l].weight.cwiseAbs().cwiseMax(1.0));
    const Eigen::VectorXd db =
        (g.layers[l].bias - fd.layers[l].bias).cwiseAbs().cwiseQuotient(
            fd.layers[l].bias.cwiseAbs().cwiseMax(1.0));
    worst = std::max({worst, dw.maxCoeff(), db.maxCoeff()});
  }
  return worst;
}

double grad_norm(const GradientSet& g) {
  double s = 0.0;
  for (const auto& l : g.layers) s += l.weight.squaredNorm() + l.bias.squaredNorm();
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("full_batch covers the grid row-major with image targets") {
  const Image img = testsupport::scene_rgb(5);
  const CoordGrid grid = sirden::make_grid(5, 5);
  const Batch b = sirden::full_batch(grid, img);
  REQUIRE(b.coords.rows() == 25);
  REQUIRE(b.targets.rows() == 25);
  REQUIRE(b.targets.cols() == 3);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) {
      const int i = r * 5 + c;
      CHECK(b.coords(i, 0) == grid.coords(i, 0));
      CHECK(b.coords(i, 1) == grid.coords(i, 1));
      for (int k = 0; k < 3; ++k) CHECK(b.targets(i, k) == img.at(r, c, k));
    }
  }
}

TEST_CASE("index_batch picks the requested rows") {
  const Image img = testsupport::scene(6);
  const CoordGrid grid = sirden::make_grid(6, 6);
  const std::vector<int> rows = {35, 0, 7, 7, 12};
  const Batch b = sirden::index_batch(grid, img, rows);
  REQUIRE(b.coords.rows() == 5);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(b.coords(static_cast<int>(i), 0) == grid.coords(rows[i], 0));
    CHECK(b.coords(static_cast<int>(i), 1) == grid.coords(rows[i], 1));
    CHECK(b.targets(static_cast<int>(i), 0) == img.data[rows[i]]);
  }
}

TEST_CASE("exact interpolation gives zero loss and zero gradients") {
  // Zero network outputs 0 everywhere; zero targets interpolate exactly.
  SirenConfig cfg;
  cfg.width = 8;
  SirenNetwork net = sirden::init(cfg, 1);
  for (auto& l : net.layers) {
    l.weight.setZero();
    l.bias.setZero();
  }
  Batch b = random_batch(6, 1, 2);
  b.targets.setZero();
  const auto [loss, grads] = sirden::loss_and_grad(net, b);
  CHECK(loss == 0.0);
  CHECK(grad_norm(grads) == 0.0);
  // Finite differences of a quadratic at its minimum: O(step^2) residue.
  const GradientSet fd = sirden::finite_diff_grad(net, b, 1e-6);
  CHECK(grad_norm(fd) < 1e-9);
}

TEST_CASE("one-neuron net with zero residual has zero gradient") {
  SirenConfig cfg;
  cfg.hidden_layers = 1;
  cfg.width = 1;
  cfg.omega0 = 1.0;
  cfg.omega_hidden = 1.0;
  SirenNetwork net;
  net.config = cfg;
  net.layers.resize(2);
  net.layers[0].weight = Eigen::MatrixXd{{1.0, 0.0}};
  net.layers[0].bias = Eigen::VectorXd::Zero(1);
  net.layers[1].weight = Eigen::MatrixXd{{2.0}};
  net.layers[1].bias = Eigen::VectorXd::Constant(1, 0.5);

  Batch b;
  b.coords.resize(1, 2);
  b.coords << 0.5, 0.5;  // u = (0,0) -> output 0.5
  b.targets = Eigen::MatrixXd::Constant(1, 1, 0.5);
  const auto [loss, grads] = sirden::loss_and_grad(net, b);
  CHECK(loss == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(grad_norm(grads) < 1e-15);
}

TEST_CASE("gradients match central finite differences on random tiny nets") {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    SirenConfig cfg;
    cfg.hidden_layers = 2;
    cfg.width = 8;
    cfg.out_dim = seed % 2 == 0 ? 1 : 3;
    const SirenNetwork net = sirden::init(cfg, seed);
    const Batch b = random_batch(4, cfg.out_dim, seed + 100);
    const auto [loss, grads] = sirden::loss_and_grad(net, b);
    const GradientSet fd = sirden::finite_diff_grad(net, b, 1e-6);
    CHECK(loss >= 0.0);
    CHECK(grad_norm(grads) > 1e-8);  // the check must not pass vacuously
    CHECK(max_rel_err(grads, fd) < 1e-5);
  }
}

TEST_CASE("final-layer bias gradient equals (2/n) * summed residuals") {
  SirenConfig cfg;
  cfg.hidden_layers = 2;
  cfg.width = 8;
  cfg.out_dim = 3;
  const SirenNetwork net = sirden::init(cfg, 11);
  const Batch b = random_batch(9, 3, 12);
  const auto [loss, grads] = sirden::loss_and_grad(net, b);

  CoordGrid grid;
  grid.coords = b.coords;
  const Eigen::MatrixXd pred = sirden::forward(net, grid);
  const Eigen::MatrixXd resid = pred - b.targets;
  for (int k = 0; k < 3; ++k) {
    const double expect = 2.0 * resid.col(k).sum() / static_cast<double>(b.coords.rows());
    CHECK(grads.layers.back().bias(k) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("doubling residuals doubles the final-layer gradients") {
  SirenConfig cfg;
  cfg.hidden_layers = 2;
  cfg.width = 8;
  const SirenNetwork net = sirden::init(cfg, 31);
  Batch b = random_batch(7, 1, 32);
  b.targets.setConstant(0.3);

  CoordGrid grid;
  grid.coords = b.coords;
  const Eigen::MatrixXd pred = sirden::forward(net, grid);
  Batch doubled = b;
  doubled.targets = 2.0 * b.targets - pred;  // residual pred - t flips to 2x

  const auto [l1, g1] = sirden::loss_and_grad(net, b);
  const auto [l2, g2] = sirden::loss_and_grad(net, doubled);
  // Hidden activations ignore the targets, so the head gradient is linear
  // in the residual.
  const auto& w1 = g1.layers.back().weight;
  const auto& w2 = g2.layers.back().weight;
  CHECK((w2 - 2.0 * w1).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(g2.layers.back().bias(0) == doctest::Approx(2.0 * g1.layers.back().bias(0)).epsilon(1e-12));
  CHECK(l2 == doctest::Approx(4.0 * l1).epsilon(1e-12));  // quadratic in residual
}

TEST_CASE("loss is the mean over samples (sum convention / H*W)") {
  SirenConfig cfg;
  cfg.width = 8;
  const SirenNetwork net = sirden::init(cfg, 41);
  const Image img = testsupport::scene(4);
  const CoordGrid grid = sirden::make_grid(4, 4);
  const Batch full = sirden::full_batch(grid, img);
  const double mean_loss = sirden::loss_value(net, full);

  double sum = 0.0;
  for (int i = 0; i < 16; ++i) {
    sum += sirden::loss_value(net, sirden::index_batch(grid, img, {i}));
  }
  CHECK(mean_loss * 16.0 == doctest::Approx(sum).epsilon(1e-12));
  CHECK(mean_loss == doctest::Approx(sum / 16.0).epsilon(1e-12));
}

TEST_CASE("loss_value matches loss_and_grad and is thread-invariant") {
  SirenConfig cfg;
  cfg.width = 16;
  const SirenNetwork net = sirden::init(cfg, 3);
  const Image img = testsupport::scene(24);
  const Batch full = sirden::full_batch(sirden::make_grid(24, 24), img);
  const auto [loss, grads] = sirden::loss_and_grad(net, full, 1);
  CHECK(sirden::loss_value(net, full, 1) == doctest::Approx(loss).epsilon(1e-15));

  const auto [loss4, grads4] = sirden::loss_and_grad(net, full, 4);
  CHECK(loss4 == doctest::Approx(loss).epsilon(1e-12));
  CHECK(max_rel_err(grads4, grads) < 1e-12);
}

TEST_CASE("non-finite parameters raise NonFiniteOutput") {
  SirenConfig cfg;
  cfg.width = 8;
  SirenNetwork net = sirden::init(cfg, 1);
  net.layers[1].weight(0, 0) = std::numeric_limits<double>::infinity();
  const Batch b = random_batch(3, 1, 9);
  CHECK_THROWS_AS((void)sirden::loss_and_grad(net, b), sirden::NonFiniteOutput);
}
