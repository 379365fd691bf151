#pragma once
/**
 * @file net.hpp
 * @brief Scalar-in, scalar-out MLP parameterization, activations and initialization.
 *
 * Layers are 0-indexed in code: layers[0] maps the input t to the first
 * hidden layer, layers.back() is the identity output layer.
 */

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pinn/errors.hpp"

namespace pinn {

/// Dense row-major matrix. Only what the engines need.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}
  Matrix(std::size_t r, std::size_t c, std::vector<double> values)
      : rows(r), cols(c), data(std::move(values)) {
    if (data.size() != r * c) throw ArgumentError("Matrix: value count does not match shape");
  }

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  bool operator==(const Matrix&) const = default;
};

enum class ActivationKind { Tanh, Identity };

inline std::string_view to_string(ActivationKind k) {
  return k == ActivationKind::Tanh ? "tanh" : "identity";
}

inline ActivationKind activation_from_string(std::string_view s) {
  if (s == "tanh") return ActivationKind::Tanh;
  if (s == "identity") return ActivationKind::Identity;
  throw ConfigError("unknown activation '" + std::string(s) + "'");
}

/// phi(z) together with its first and second derivatives.
struct ActivationValue {
  double phi;
  double phi1;
  double phi2;
};

/// tanh' and tanh'' are expressed through the shared tanh value, so one
/// transcendental call serves all three outputs.
inline ActivationValue activation_eval(ActivationKind kind, double z) {
  if (!std::isfinite(z)) throw DomainError("activation_eval: non-finite input");
  if (kind == ActivationKind::Identity) return {z, 1.0, 0.0};
  const double a = std::tanh(z);
  const double d = 1.0 - a * a;
  return {a, d, -2.0 * a * d};
}

struct LayerParams {
  Matrix weights;               // n_out x n_in
  std::vector<double> biases;   // n_out

  std::size_t n_in() const { return weights.cols; }
  std::size_t n_out() const { return weights.rows; }
  std::size_t param_count() const { return weights.data.size() + biases.size(); }

  bool operator==(const LayerParams&) const = default;
};

struct MlpParams {
  std::vector<LayerParams> layers;
  ActivationKind activation = ActivationKind::Tanh;  // hidden layers; output is identity

  std::size_t depth() const { return layers.size(); }

  /// Activation applied by layer `l` (0-based).
  ActivationKind activation_of(std::size_t l) const {
    return l + 1 == layers.size() ? ActivationKind::Identity : activation;
  }

  std::size_t param_count() const {
    std::size_t n = 0;
    for (const auto& layer : layers) n += layer.param_count();
    return n;
  }

  /// Layer widths, input first: (1, 3, 3, 1) for the reference network.
  std::vector<std::size_t> arch() const {
    std::vector<std::size_t> widths;
    if (layers.empty()) return widths;
    widths.push_back(layers.front().n_in());
    for (const auto& layer : layers) widths.push_back(layer.n_out());
    return widths;
  }

  bool operator==(const MlpParams&) const = default;
};

/// Throws ArgumentError describing the first violated invariant.
inline void check_params(const MlpParams& p) {
  if (p.layers.empty()) throw ArgumentError("MlpParams: no layers");
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const auto& layer = p.layers[l];
    const std::string where = "layer " + std::to_string(l);
    if (layer.weights.data.size() != layer.weights.rows * layer.weights.cols)
      throw ArgumentError(where + ": weight storage does not match its shape");
    if (layer.weights.rows != layer.biases.size())
      throw ArgumentError(where + ": weight rows (" + std::to_string(layer.weights.rows) +
                          ") != bias length (" + std::to_string(layer.biases.size()) + ")");
    if (layer.weights.rows == 0 || layer.weights.cols == 0)
      throw ArgumentError(where + ": empty layer");
    if (l > 0 && layer.n_in() != p.layers[l - 1].n_out())
      throw ArgumentError(where + ": input width does not chain with previous layer");
    for (double v : layer.weights.data)
      if (!std::isfinite(v)) throw ArgumentError(where + ": non-finite weight");
    for (double v : layer.biases)
      if (!std::isfinite(v)) throw ArgumentError(where + ": non-finite bias");
  }
  if (p.layers.front().n_in() != 1) throw ArgumentError("MlpParams: input width must be 1");
  if (p.layers.back().n_out() != 1) throw ArgumentError("MlpParams: output width must be 1");
}

/// The fixed 1-3-3-1 parameters of the hand-worked example.
inline MlpParams init_worked_example_params() {
  MlpParams p;
  p.activation = ActivationKind::Tanh;
  p.layers.push_back({Matrix(3, 1, {0.2, -0.5, 0.8}), {-0.1, 0.3, -0.2}});
  p.layers.push_back({Matrix(3, 3,
                             {0.1, -0.3, 0.5,
                              0.6, 0.2, -0.4,
                              -0.2, 0.7, 0.1}),
                      {0.2, -0.1, 0.4}});
  p.layers.push_back({Matrix(1, 3, {0.9, -0.6, 0.3}), {-0.3}});
  return p;
}

/// All-zero parameters with the given architecture.
inline MlpParams zero_params(std::span<const std::size_t> arch,
                             ActivationKind act = ActivationKind::Tanh) {
  if (arch.size() < 2) throw ConfigError("architecture needs at least an input and an output width");
  if (arch.front() != 1 || arch.back() != 1)
    throw ConfigError("architecture must start and end with width 1");
  MlpParams p;
  p.activation = act;
  for (std::size_t l = 0; l + 1 < arch.size(); ++l) {
    if (arch[l] == 0 || arch[l + 1] == 0) throw ConfigError("architecture has a zero-width layer");
    p.layers.push_back({Matrix(arch[l + 1], arch[l]), std::vector<double>(arch[l + 1], 0.0)});
  }
  return p;
}

/**
 * SplitMix64 (Steele, Lea & Flood). 64-bit state, one add and three
 * xor-shift-multiply rounds per output. Bit-exact across platforms.
 */
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Top 53 bits scaled into [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on [-bound, bound).
  double symmetric(double bound) { return bound * (2.0 * uniform01() - 1.0); }

 private:
  std::uint64_t state_;
};

/**
 * Random initialization: every weight and bias of a layer with fan-in n is
 * drawn from U[-1/sqrt(n), 1/sqrt(n)]. Sampling order is layer-major; within
 * a layer all weights (row-major) come before the biases.
 */
inline MlpParams init_random(std::span<const std::size_t> arch, std::uint64_t seed,
                             ActivationKind act = ActivationKind::Tanh) {
  MlpParams p = zero_params(arch, act);
  SplitMix64 rng(seed);
  for (auto& layer : p.layers) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.n_in()));
    for (double& w : layer.weights.data) w = rng.symmetric(bound);
    for (double& b : layer.biases) b = rng.symmetric(bound);
  }
  return p;
}

inline MlpParams init_random(std::initializer_list<std::size_t> arch, std::uint64_t seed,
                             ActivationKind act = ActivationKind::Tanh) {
  const std::vector<std::size_t> v(arch);
  return init_random(std::span<const std::size_t>(v), seed, act);
}

/// Flat parameter vector in the canonical order (same as init_random).
inline std::vector<double> flatten(const MlpParams& p) {
  std::vector<double> out;
  out.reserve(p.param_count());
  for (const auto& layer : p.layers) {
    out.insert(out.end(), layer.weights.data.begin(), layer.weights.data.end());
    out.insert(out.end(), layer.biases.begin(), layer.biases.end());
  }
  return out;
}

/// Writes `flat` back into a copy of `shape` using the canonical order.
inline MlpParams unflatten(const MlpParams& shape, std::span<const double> flat) {
  if (flat.size() != shape.param_count())
    throw ArgumentError("unflatten: expected " + std::to_string(shape.param_count()) +
                        " values, got " + std::to_string(flat.size()));
  MlpParams p = shape;
  std::size_t k = 0;
  for (auto& layer : p.layers) {
    for (double& w : layer.weights.data) w = flat[k++];
    for (double& b : layer.biases) b = flat[k++];
  }
  return p;
}

}  // namespace pinn
