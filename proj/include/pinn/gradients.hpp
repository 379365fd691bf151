#pragma once
/**
 * @file gradients.hpp
 * @brief dL/dtheta container shared by all gradient engines.
 */

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pinn/dual.hpp"
#include "pinn/errors.hpp"
#include "pinn/loss.hpp"
#include "pinn/net.hpp"

namespace pinn {

struct LayerGradients {
  Matrix d_weights;
  std::vector<double> d_biases;

  bool operator==(const LayerGradients&) const = default;
};

struct Gradients {
  std::vector<LayerGradients> layers;

  static Gradients zeros_like(const MlpParams& p) {
    Gradients g;
    g.layers.reserve(p.depth());
    for (const auto& layer : p.layers)
      g.layers.push_back({Matrix(layer.weights.rows, layer.weights.cols),
                          std::vector<double>(layer.biases.size(), 0.0)});
    return g;
  }

  /// Same canonical order as pinn::flatten(MlpParams).
  std::vector<double> flat() const {
    std::vector<double> out;
    for (const auto& layer : layers) {
      out.insert(out.end(), layer.d_weights.data.begin(), layer.d_weights.data.end());
      out.insert(out.end(), layer.d_biases.begin(), layer.d_biases.end());
    }
    return out;
  }

  static Gradients from_flat(const MlpParams& shape, std::span<const double> flat) {
    Gradients g = zeros_like(shape);
    if (flat.size() != shape.param_count())
      throw ArgumentError("Gradients::from_flat: size mismatch");
    std::size_t k = 0;
    for (auto& layer : g.layers) {
      for (double& v : layer.d_weights.data) v = flat[k++];
      for (double& v : layer.d_biases) v = flat[k++];
    }
    return g;
  }

  bool operator==(const Gradients&) const = default;
};

inline bool congruent(const Gradients& g, const MlpParams& p) {
  if (g.layers.size() != p.layers.size()) return false;
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const auto& gl = g.layers[l];
    const auto& pl = p.layers[l];
    if (gl.d_weights.rows != pl.weights.rows || gl.d_weights.cols != pl.weights.cols ||
        gl.d_weights.data.size() != pl.weights.data.size() ||
        gl.d_biases.size() != pl.biases.size())
      return false;
  }
  return true;
}

inline void require_congruent(const Gradients& g, const MlpParams& p, const char* who) {
  if (!congruent(g, p)) throw ArgumentError(std::string(who) + ": gradient shape does not match parameters");
}

inline double max_abs_diff(const Gradients& a, const Gradients& b) {
  const auto fa = a.flat();
  const auto fb = b.flat();
  if (fa.size() != fb.size()) throw ArgumentError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) m = std::max(m, std::abs(fa[i] - fb[i]));
  return m;
}

/**
 * Drives a per-point engine over the loss. For every evaluation point the
 * engine receives the trace and the loss partials (w_y, w_y_dot) =
 * (dL/dy_hat, dL/dy_hat'):
 *
 *   collocation point t_i : (2 R_i / N, 2 R_i / N)
 *   initial condition     : (2 lambda (y_hat(t_ic) - y_ic), 0)
 *
 * Points are visited in collocation order, then t_ic, so accumulation is
 * deterministic.
 */
template <class PointFn>
Gradients accumulate_loss_gradient(const MlpParams& params, const Problem& problem,
                                   PointFn&& point_fn) {
  check_problem(problem);
  Gradients g = Gradients::zeros_like(params);
  const double n = static_cast<double>(problem.collocation.size());
  for (double t : problem.collocation) {
    const DualTrace trace = forward_dual(params, t);
    const double w = 2.0 * residual(trace) / n;
    point_fn(trace, w, w, g);
  }
  const DualTrace ic = forward_dual(params, problem.t_ic);
  point_fn(ic, 2.0 * problem.lambda * (ic.y_hat - problem.y_ic), 0.0, g);
  return g;
}

}  // namespace pinn
