#pragma once
/**
 * @file dual.hpp
 * @brief Dual forward propagation of y(t) and dy/dt through the MLP.
 *
 * Each layer carries the pair (a, da/dt). The input seeds the recursion with
 * a0 = t, da0/dt = 1; then per layer
 *
 *   z  = W a_prev + b          z_dot = W a_dot_prev
 *   a  = phi(z)                a_dot = phi'(z) * z_dot
 *
 * and the output layer is the identity. Every record is kept because both
 * gradient engines consume z, z_dot, a and a_dot at every layer.
 */

#include <cmath>
#include <span>
#include <vector>

#include "pinn/errors.hpp"
#include "pinn/net.hpp"

namespace pinn {

struct DualLayerRecord {
  std::vector<double> z;
  std::vector<double> z_dot;
  std::vector<double> a;
  std::vector<double> a_dot;
};

struct DualTrace {
  double t = 0.0;
  std::vector<DualLayerRecord> layers;
  double y_hat = 0.0;
  double y_hat_dot = 0.0;

  /// Activation vector feeding layer `l`; {t} for the first layer.
  std::span<const double> input_a(std::size_t l) const {
    return l == 0 ? std::span<const double>(&t, 1) : std::span<const double>(layers[l - 1].a);
  }
  /// Time derivative feeding layer `l`; {1} for the first layer.
  std::span<const double> input_a_dot(std::size_t l) const {
    static constexpr double kSeed = 1.0;
    return l == 0 ? std::span<const double>(&kSeed, 1)
                  : std::span<const double>(layers[l - 1].a_dot);
  }
};

inline DualTrace forward_dual(const MlpParams& params, double t) {
  if (!std::isfinite(t)) throw DomainError("forward_dual: non-finite input t");
  DualTrace trace;
  trace.t = t;
  trace.layers.reserve(params.depth());

  std::vector<double> a{t};
  std::vector<double> a_dot{1.0};
  for (std::size_t l = 0; l < params.depth(); ++l) {
    const auto& layer = params.layers[l];
    const ActivationKind act = params.activation_of(l);
    DualLayerRecord rec;
    const std::size_t n = layer.n_out();
    rec.z.resize(n);
    rec.z_dot.resize(n);
    rec.a.resize(n);
    rec.a_dot.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double z = layer.biases[i];
      double z_dot = 0.0;
      for (std::size_t j = 0; j < layer.n_in(); ++j) {
        z += layer.weights(i, j) * a[j];
        z_dot += layer.weights(i, j) * a_dot[j];
      }
      const ActivationValue phi = activation_eval(act, z);
      rec.z[i] = z;
      rec.z_dot[i] = z_dot;
      rec.a[i] = phi.phi;
      rec.a_dot[i] = phi.phi1 * z_dot;
    }
    a = rec.a;
    a_dot = rec.a_dot;
    trace.layers.push_back(std::move(rec));
  }
  trace.y_hat = trace.layers.back().a[0];
  trace.y_hat_dot = trace.layers.back().a_dot[0];
  return trace;
}

inline std::vector<DualTrace> forward_batch(const MlpParams& params, std::span<const double> ts) {
  if (ts.empty()) throw ArgumentError("forward_batch: empty input");
  std::vector<DualTrace> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back(forward_dual(params, t));
  return out;
}

}  // namespace pinn
