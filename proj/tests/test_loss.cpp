#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "pinn/loss.hpp"
#include "test_support.hpp"

using namespace pinn;

TEST(Residual, WorkedExample) {
  EXPECT_NEAR(residual(forward_dual(init_worked_example_params(), 0.5)), 0.7281, 2e-3);
}

TEST(Residual, ZeroNetworkAndExactSolutionSurrogate) {
  const std::vector<std::size_t> arch{1, 2, 1};
  EXPECT_EQ(residual(forward_dual(zero_params(arch), 0.4)), 0.0);
  DualTrace tr;
  tr.y_hat = 0.37;
  tr.y_hat_dot = -0.37;
  EXPECT_EQ(residual(tr), 0.0);
}

TEST(EvaluateLoss, WorkedExample) {
  const auto l = evaluate_loss(init_worked_example_params(), {10.0, 0.0, 1.0, {0.5}});
  EXPECT_NEAR(l.l_r, 0.5301, 2e-3);
  EXPECT_NEAR(l.l_ic, 1.2566, 2e-3);
  EXPECT_NEAR(l.l_total, 13.0961, 2e-3);
  EXPECT_NEAR(l.y0_hat, -0.1210, 2e-3);
  ASSERT_EQ(l.residuals.size(), 1u);
}

TEST(EvaluateLoss, LambdaZeroDropsInitialCondition) {
  const auto p = init_random({1, 3, 3, 1}, 4);
  const Problem prob{0.0, 0.0, 1.0, {0.1, 0.4, 0.9}};
  const auto l = evaluate_loss(p, prob);
  double mean = 0.0;
  for (double r : l.residuals) mean += r * r;
  mean /= 3.0;
  EXPECT_EQ(l.l_total, mean);
}

TEST(EvaluateLoss, TotalMatchesRecomputationFromStoredFields) {
  std::mt19937_64 rng(17);
  const std::vector<std::size_t> arch{1, 3, 3, 1};
  Problem prob{10.0, 0.0, 1.0, {}};
  for (int i = 0; i < 30; ++i) prob.collocation.push_back(i / 29.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto l = evaluate_loss(pinn::testing::random_params(rng, arch), prob);
    double s = 0.0;
    for (double r : l.residuals) s += r * r;
    const double oracle = s / 30.0 + 10.0 * (l.y0_hat - 1.0) * (l.y0_hat - 1.0);
    EXPECT_NEAR(l.l_total, oracle, 1e-12);
    EXPECT_GE(l.l_r, 0.0);
    EXPECT_GE(l.l_ic, 0.0);
  }
}

TEST(EvaluateLoss, StrictlyIncreasingInLambda) {
  const auto p = init_random({1, 3, 3, 1}, 1);
  Problem prob{0.0, 0.0, 1.0, {0.2, 0.6}};
  double prev = -1.0;
  for (double lambda : {0.0, 0.5, 1.0, 10.0, 100.0}) {
    prob.lambda = lambda;
    const auto l = evaluate_loss(p, prob);
    ASSERT_GT(l.l_ic, 0.0);
    EXPECT_GT(l.l_total, prev);
    prev = l.l_total;
  }
}

TEST(EvaluateLoss, PermutationInvariance) {
  std::mt19937_64 rng(23);
  const auto p = init_random({1, 4, 4, 1}, 2);
  Problem prob{10.0, 0.0, 1.0, {}};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 50; ++i) prob.collocation.push_back(unit(rng));
  const double base = evaluate_loss(p, prob).l_r;
  for (int k = 0; k < 10; ++k) {
    std::shuffle(prob.collocation.begin(), prob.collocation.end(), rng);
    EXPECT_NEAR(evaluate_loss(p, prob).l_r, base, 1e-12);
  }
}

TEST(EvaluateLoss, ZeroLossCharacterization) {
  // Zero network with y_ic = 0: every residual is 0 and y_hat(0) = y_ic -> zero loss.
  const std::vector<std::size_t> arch{1, 3, 1};
  const auto zero = zero_params(arch);
  const auto l0 = evaluate_loss(zero, {10.0, 0.0, 0.0, {0.1, 0.5}});
  EXPECT_EQ(l0.l_total, 0.0);

  // Converse: one nonzero residual or a missed IC makes it positive.
  const auto l1 = evaluate_loss(zero, {10.0, 0.0, 1.0, {0.1, 0.5}});
  EXPECT_GT(l1.l_total, 0.0);
  auto bias_only = zero;
  bias_only.layers.back().biases[0] = 0.5;  // y = 0.5 constant: R = 0.5 everywhere
  const auto l2 = evaluate_loss(bias_only, {10.0, 0.0, 0.5, {0.1, 0.5}});
  EXPECT_EQ(l2.l_ic, 0.0);
  EXPECT_GT(l2.l_total, 0.0);
}

TEST(EvaluateLoss, RejectsInvalidProblem) {
  const auto p = init_worked_example_params();
  EXPECT_THROW(evaluate_loss(p, {10.0, 0.0, 1.0, {}}), ArgumentError);
  EXPECT_THROW(evaluate_loss(p, {-1.0, 0.0, 1.0, {0.5}}), ArgumentError);
  EXPECT_THROW(evaluate_loss(p, {NAN, 0.0, 1.0, {0.5}}), ArgumentError);
}
