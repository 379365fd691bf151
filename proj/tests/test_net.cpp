#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "pinn/net.hpp"
#include "test_support.hpp"

using namespace pinn;

TEST(Activation, TanhAtZero) {
  const auto v = activation_eval(ActivationKind::Tanh, 0.0);
  EXPECT_EQ(v.phi, 0.0);
  EXPECT_EQ(v.phi1, 1.0);
  EXPECT_EQ(v.phi2, 0.0);
}

TEST(Activation, TanhMatchesWorkedExampleNeuron) {
  // a_3 of the first hidden layer at t = 0.5 is tanh(0.2).
  EXPECT_NEAR(activation_eval(ActivationKind::Tanh, 0.2).phi, 0.1974, 5e-5);
}

TEST(Activation, Identity) {
  const auto v = activation_eval(ActivationKind::Identity, -0.7);
  EXPECT_EQ(v.phi, -0.7);
  EXPECT_EQ(v.phi1, 1.0);
  EXPECT_EQ(v.phi2, 0.0);
}

TEST(Activation, RejectsNonFinite) {
  EXPECT_THROW(activation_eval(ActivationKind::Tanh, NAN), DomainError);
  EXPECT_THROW(activation_eval(ActivationKind::Identity, INFINITY), DomainError);
}

TEST(Activation, DerivativesMatchCentralDifferences) {
  const double h = 1e-4;
  for (double z = -10.0; z <= 10.0; z += 0.05) {
    const auto v = activation_eval(ActivationKind::Tanh, z);
    const double fd1 = (std::tanh(z + h) - std::tanh(z - h)) / (2 * h);
    const double fd2 = (activation_eval(ActivationKind::Tanh, z + h).phi1 -
                        activation_eval(ActivationKind::Tanh, z - h).phi1) / (2 * h);
    EXPECT_NEAR(v.phi1, fd1, 1e-6) << "z = " << z;
    EXPECT_NEAR(v.phi2, fd2, 1e-6) << "z = " << z;
  }
}

TEST(Activation, OddSymmetry) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double z = dist(rng);
    const auto p = activation_eval(ActivationKind::Tanh, z);
    const auto m = activation_eval(ActivationKind::Tanh, -z);
    EXPECT_NEAR(m.phi, -p.phi, 1e-12);
    EXPECT_NEAR(m.phi1, p.phi1, 1e-12);
    EXPECT_NEAR(m.phi2, -p.phi2, 1e-12);
  }
}

TEST(WorkedExampleParams, Values) {
  const MlpParams p = init_worked_example_params();
  EXPECT_NO_THROW(check_params(p));
  EXPECT_EQ(p.param_count(), 22u);
  EXPECT_EQ(p.layers[1].weights(0, 1), -0.3);
  EXPECT_EQ(p.layers[2].biases[0], -0.3);
  EXPECT_EQ(p.layers[0].weights(2, 0), 0.8);
  EXPECT_EQ(p.layers[1].biases[2], 0.4);
  EXPECT_EQ(p.arch(), (std::vector<std::size_t>{1, 3, 3, 1}));
  EXPECT_EQ(p.activation_of(0), ActivationKind::Tanh);
  EXPECT_EQ(p.activation_of(2), ActivationKind::Identity);
}

TEST(CheckParams, DetectsViolations) {
  MlpParams p = init_worked_example_params();
  p.layers[1].biases.pop_back();
  EXPECT_THROW(check_params(p), ArgumentError);

  p = init_worked_example_params();
  p.layers[2].weights(0, 0) = NAN;
  EXPECT_THROW(check_params(p), ArgumentError);

  p = init_worked_example_params();
  p.layers.erase(p.layers.begin());  // input width becomes 3
  EXPECT_THROW(check_params(p), ArgumentError);

  p = init_worked_example_params();
  p.layers[1] = {Matrix(2, 2), {0.0, 0.0}};  // does not chain with the 3-wide first layer
  EXPECT_THROW(check_params(p), ArgumentError);
}

TEST(InitRandom, DeterministicBytes) {
  const auto a = flatten(init_random({1, 3, 3, 1}, 42));
  const auto b = flatten(init_random({1, 3, 3, 1}, 42));
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)), 0);
  EXPECT_NE(flatten(init_random({1, 3, 3, 1}, 43)), a);
}

TEST(InitRandom, FirstLayerWithinUnitBound) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto p = init_random({1, 3, 3, 1}, seed);
    for (double w : p.layers[0].weights.data) EXPECT_LE(std::abs(w), 1.0);
    for (double b : p.layers[0].biases) EXPECT_LE(std::abs(b), 1.0);
  }
}

TEST(InitRandom, MatchesIndependentReference) {
  // tests/oracles/splitmix_init.py, arch (1,3,3,1), seed 7.
  const std::vector<double> expected{
      -0.22034050321745702, -0.9664234109436878, 0.8015213612137668,  0.16586058605615617,
      -0.09511620997706327, -0.5011369554345133, -0.037004683277285635, -0.1985198818605214,
      -0.4223221392736278,  -0.10029567516455967, -0.45776954223581373, 0.53101684380561,
      0.4826874400213105,   0.42877698304699113, 0.4203198436245914,   0.05575750594491709,
      0.4383401410269788,   -0.20050069857936575, 0.1375486223015146,  0.29712983145816857,
      0.20157228734988694,  -0.45415027208054565};
  EXPECT_EQ(flatten(init_random({1, 3, 3, 1}, 7)), expected);
}

TEST(InitRandom, ShapeInvariantsForRandomArchitectures) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> depth(2, 5);
  std::uniform_int_distribution<std::size_t> width(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = depth(rng);
    std::vector<std::size_t> arch{1};
    for (int i = 0; i + 2 < n; ++i) arch.push_back(width(rng));
    arch.push_back(1);
    const auto p = init_random(std::span<const std::size_t>(arch), rng());
    ASSERT_NO_THROW(check_params(p));
    EXPECT_EQ(p.arch(), arch);
    std::size_t count = 0;
    for (std::size_t l = 0; l + 1 < arch.size(); ++l) {
      count += arch[l] * arch[l + 1] + arch[l + 1];
      const double bound = 1.0 / std::sqrt(static_cast<double>(arch[l]));
      for (double w : p.layers[l].weights.data) EXPECT_LE(std::abs(w), bound);
      for (double b : p.layers[l].biases) EXPECT_LE(std::abs(b), bound);
    }
    EXPECT_EQ(p.param_count(), count);
  }
}

TEST(InitRandom, RejectsMalformedArchitectures) {
  EXPECT_THROW(init_random({}, 1), ConfigError);
  EXPECT_THROW(init_random({1}, 1), ConfigError);
  EXPECT_THROW(init_random({2, 3, 1}, 1), ConfigError);
  EXPECT_THROW(init_random({1, 3, 2}, 1), ConfigError);
  EXPECT_THROW(init_random({1, 0, 1}, 1), ConfigError);
}

TEST(Flatten, RoundTrip) {
  const auto p = init_random({1, 4, 2, 1}, 9);
  EXPECT_EQ(unflatten(p, flatten(p)), p);
  EXPECT_THROW(unflatten(p, std::vector<double>(3)), ArgumentError);
}
