#pragma once
/**
 * @file optim.hpp
 * @brief Plain gradient descent and Adam with bias correction.
 */

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>

#include "pinn/errors.hpp"
#include "pinn/gradients.hpp"
#include "pinn/net.hpp"

namespace pinn {

namespace detail {

/// Calls fn(theta, grad) for each weight and bias block.
template <class Fn>
void for_each_block(MlpParams& p, const Gradients& g, Fn&& fn) {
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    fn(std::span<double>(p.layers[l].weights.data), std::span<const double>(g.layers[l].d_weights.data));
    fn(std::span<double>(p.layers[l].biases), std::span<const double>(g.layers[l].d_biases));
  }
}

}  // namespace detail

struct GdConfig {
  double eta = 0.01;
};

/// theta - eta * g. eta = 0 is accepted and leaves the parameters unchanged.
inline MlpParams gd_step(const MlpParams& params, const Gradients& grads, const GdConfig& cfg) {
  if (!std::isfinite(cfg.eta) || cfg.eta < 0.0) throw ConfigError("gd_step: learning rate must be finite and >= 0");
  require_congruent(grads, params, "gd_step");
  MlpParams out = params;
  detail::for_each_block(out, grads, [&](std::span<double> theta, std::span<const double> g) {
    for (std::size_t k = 0; k < theta.size(); ++k) theta[k] -= cfg.eta * g[k];
  });
  return out;
}

struct AdamState {
  Gradients m;
  Gradients v;
  std::uint64_t step_count = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double eta = 1e-3;

  static AdamState for_params(const MlpParams& p, double eta = 1e-3) {
    AdamState s;
    s.m = Gradients::zeros_like(p);
    s.v = Gradients::zeros_like(p);
    s.eta = eta;
    return s;
  }
};

/**
 * One Adam update:
 *   m <- b1 m + (1 - b1) g,   v <- b2 v + (1 - b2) g^2
 *   theta <- theta - eta * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
 */
inline std::pair<MlpParams, AdamState> adam_step(const MlpParams& params, const Gradients& grads,
                                                 AdamState state) {
  require_congruent(grads, params, "adam_step");
  if (!congruent(state.m, params) || !congruent(state.v, params))
    throw ArgumentError("adam_step: optimizer state shape does not match parameters");
  if (!std::isfinite(state.eta) || state.eta < 0.0) throw ConfigError("adam_step: learning rate must be finite and >= 0");

  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);

  MlpParams out = params;
  for (std::size_t l = 0; l < out.layers.size(); ++l) {
    auto update = [&](std::span<double> theta, std::span<const double> g, std::span<double> m,
                      std::span<double> v) {
      for (std::size_t k = 0; k < theta.size(); ++k) {
        m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
        v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
        const double m_hat = m[k] / c1;
        const double v_hat = v[k] / c2;
        theta[k] -= state.eta * m_hat / (std::sqrt(v_hat) + state.eps);
      }
    };
    update(out.layers[l].weights.data, grads.layers[l].d_weights.data, state.m.layers[l].d_weights.data,
           state.v.layers[l].d_weights.data);
    update(out.layers[l].biases, grads.layers[l].d_biases, state.m.layers[l].d_biases,
           state.v.layers[l].d_biases);
  }
  return {std::move(out), std::move(state)};
}

}  // namespace pinn
