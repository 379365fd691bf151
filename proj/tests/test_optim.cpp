#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "pinn/engine.hpp"
#include "pinn/optim.hpp"
#include "test_support.hpp"

using namespace pinn;

namespace {

MlpParams small_params(const std::vector<double>& flat) {
  const std::vector<std::size_t> arch{1, 2, 1};
  return unflatten(zero_params(arch), flat);
}

}  // namespace

TEST(GdStep, WorkedExampleUpdate) {
  const auto p = init_worked_example_params();
  const auto g = gradient_full(p, {10.0, 0.0, 1.0, {0.5}});
  const auto next = gd_step(p, g, GdConfig{0.01});
  EXPECT_NEAR(next.layers[2].weights(0, 1), -0.5986, 2e-3);
  EXPECT_DOUBLE_EQ(next.layers[2].weights(0, 1), -0.6 - 0.01 * g.layers[2].d_weights(0, 1));
}

TEST(GdStep, ZeroGradientOrZeroRateIsIdentity) {
  const auto p = init_worked_example_params();
  EXPECT_EQ(gd_step(p, Gradients::zeros_like(p), GdConfig{0.5}), p);
  const auto g = gradient_full(p, {10.0, 0.0, 1.0, {0.5}});
  EXPECT_EQ(gd_step(p, g, GdConfig{0.0}), p);
}

TEST(GdStep, StepBackRecoversParameters) {
  const auto p = init_worked_example_params();
  const auto g = gradient_full(p, {10.0, 0.0, 1.0, {0.5}});
  const auto fwd = gd_step(p, g, GdConfig{0.01});
  auto neg = g;
  for (auto& l : neg.layers) {
    for (double& v : l.d_weights.data) v = -v;
    for (double& v : l.d_biases) v = -v;
  }
  const auto back = flatten(gd_step(fwd, neg, GdConfig{0.01}));
  const auto orig = flatten(p);
  for (std::size_t k = 0; k < orig.size(); ++k) EXPECT_NEAR(back[k], orig[k], 1e-15);
}

TEST(GdStep, SmallStepDecreasesLoss) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto arch = pinn::testing::random_arch(rng, 2, 4, 5);
    const auto p = pinn::testing::random_params(rng, arch);
    const auto prob = pinn::testing::random_problem(rng);
    const auto g = gradient_adjoint(p, prob);
    const double before = evaluate_loss(p, prob).l_total;
    bool decreased = false;
    for (double eta = 1e-1; eta > 1e-9 && !decreased; eta *= 0.1)
      decreased = evaluate_loss(gd_step(p, g, GdConfig{eta}), prob).l_total < before;
    EXPECT_TRUE(decreased) << "trial " << trial;
  }
}

TEST(GdStep, Rejections) {
  const auto p = init_worked_example_params();
  const auto g = Gradients::zeros_like(p);
  EXPECT_THROW(gd_step(p, g, GdConfig{-0.1}), ConfigError);
  EXPECT_THROW(gd_step(p, g, GdConfig{std::nan("")}), ConfigError);
  const std::vector<std::size_t> other{1, 2, 1};
  EXPECT_THROW(gd_step(p, Gradients::zeros_like(zero_params(other)), GdConfig{0.1}), ArgumentError);
}

TEST(AdamStep, FirstStepMovesByEtaAgainstSign) {
  const auto p = init_worked_example_params();
  const auto g = gradient_full(p, {10.0, 0.0, 1.0, {0.5}});
  auto [next, state] = adam_step(p, g, AdamState::for_params(p, 1e-3));
  EXPECT_EQ(state.step_count, 1u);
  const auto before = flatten(p);
  const auto after = flatten(next);
  const auto gf = g.flat();
  for (std::size_t k = 0; k < gf.size(); ++k) {
    if (std::abs(gf[k]) < 1e-4) continue;
    EXPECT_NEAR(after[k] - before[k], -1e-3 * std::copysign(1.0, gf[k]), 1e-7) << k;
  }
}

TEST(AdamStep, ZeroGradientLeavesParameters) {
  const auto p = init_worked_example_params();
  auto [next, state] = adam_step(p, Gradients::zeros_like(p), AdamState::for_params(p));
  EXPECT_EQ(next, p);
  EXPECT_EQ(state.step_count, 1u);
}

TEST(AdamStep, MatchesIndependentTrajectory) {
  const std::vector<double> theta0{0.3, -0.7, 0.1, 0.25, -0.4, 0.9, -0.05};
  const std::array<double, 7> c{1.0, 2.0, 0.5, 3.0, 1.5, 0.25, 4.0};
  const std::array<double, 7> target{0.5, 0.5, -0.2, 0.0, 1.0, -1.0, 0.3};
  const std::array<double, 7> expected{0.39754131383471597, -0.6002873912531377, 0.0014188442743273567,
                                       0.15180319129465555, -0.3002439287523875, 0.8001769799973008,
                                       0.04883234276569616};
  MlpParams p = small_params(theta0);
  AdamState state = AdamState::for_params(p, 0.01);
  for (int step = 0; step < 10; ++step) {
    const auto theta = flatten(p);
    std::vector<double> g(7);
    for (std::size_t k = 0; k < 7; ++k) g[k] = 2.0 * c[k] * (theta[k] - target[k]);
    auto [next, s] = adam_step(p, Gradients::from_flat(p, g), std::move(state));
    p = std::move(next);
    state = std::move(s);
  }
  const auto got = flatten(p);
  for (std::size_t k = 0; k < 7; ++k) EXPECT_NEAR(got[k], expected[k], 1e-12) << k;
}

TEST(AdamStep, StepMagnitudeBounded) {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> noise(0.0, 50.0);
  MlpParams p = small_params({0, 0, 0, 0, 0, 0, 0});
  AdamState state = AdamState::for_params(p, 0.01);
  for (int step = 0; step < 200; ++step) {
    std::vector<double> g(7);
    for (double& v : g) v = noise(rng);
    const auto before = flatten(p);
    auto [next, s] = adam_step(p, Gradients::from_flat(p, g), std::move(state));
    const auto after = flatten(next);
    for (std::size_t k = 0; k < 7; ++k) EXPECT_LE(std::abs(after[k] - before[k]), 10 * 0.01);
    p = std::move(next);
    state = std::move(s);
  }
}

TEST(AdamStep, Rejections) {
  const auto p = init_worked_example_params();
  const std::vector<std::size_t> other{1, 2, 1};
  const auto q = zero_params(other);
  EXPECT_THROW(adam_step(p, Gradients::zeros_like(q), AdamState::for_params(p)), ArgumentError);
  EXPECT_THROW(adam_step(p, Gradients::zeros_like(p), AdamState::for_params(q)), ArgumentError);
  EXPECT_THROW(adam_step(p, Gradients::zeros_like(p), AdamState::for_params(p, -1.0)), ConfigError);
}
