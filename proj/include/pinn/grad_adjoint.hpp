#pragma once
/**
 * @file grad_adjoint.hpp
 * @brief Reverse-accumulation gradient engine over a stored DualTrace.
 *
 * Derivation. Forward, per layer m (phi = identity on the output layer):
 *
 *   z = W a_prev + b,   z_dot = W a_dot_prev,   a = phi(z),   a_dot = phi'(z) z_dot.
 *
 * Let bar_x denote dL/dx for the loss weights (w_y, w_y_dot) seeded at the
 * output: bar_a = w_y, bar_a_dot = w_y_dot. Transposing the four forward
 * relations gives, element-wise over neurons of layer m,
 *
 *   bar_z     = phi'(z) bar_a + phi''(z) z_dot bar_a_dot
 *   bar_z_dot = phi'(z) bar_a_dot
 *
 * The second term of bar_z is the transpose of the product-rule term
 * phi''(z) (sum_k W P_k) z_dot in the forward Q recursion: a_dot depends on z
 * through phi'(z), so adjoint mass arriving at a_dot leaks into z. Then
 *
 *   dL/dW    += bar_z a_prev^T + bar_z_dot a_dot_prev^T
 *   dL/db    += bar_z
 *   bar_a_prev     = W^T bar_z
 *   bar_a_dot_prev = W^T bar_z_dot
 *
 * One sweep per evaluation point yields every parameter's gradient, and the
 * number of layer-level operations is independent of the parameter count.
 * Pairing the forward P/Q recursion with this sweep is a standard
 * forward-vs-reverse identity: for any theta, w_y P_out + w_y_dot Q_out
 * equals the entry of the reverse product, which is what the cross-engine
 * tests check.
 */

#include <cstddef>
#include <vector>

#include "pinn/dual.hpp"
#include "pinn/gradients.hpp"
#include "pinn/loss.hpp"
#include "pinn/net.hpp"

namespace pinn {

struct AdjointState {
  std::vector<double> bar_a;
  std::vector<double> bar_a_dot;
};

/// Counts layer-level operations (outer-product updates and transposed mat-vecs).
struct AdjointStats {
  std::size_t points = 0;
  std::size_t layer_ops = 0;
};

/// Reverse sweep for one point; accumulates into `g`.
inline void adjoint_accumulate_point(const MlpParams& params, const DualTrace& trace, double w_y,
                                     double w_y_dot, Gradients& g, AdjointStats* stats = nullptr) {
  AdjointState s{{w_y}, {w_y_dot}};
  std::vector<double> bar_z;
  std::vector<double> bar_z_dot;
  for (std::size_t m = params.depth(); m-- > 0;) {
    const auto& layer = params.layers[m];
    const auto& rec = trace.layers[m];
    const ActivationKind act = params.activation_of(m);
    const std::size_t n_out = layer.n_out();
    const std::size_t n_in = layer.n_in();

    bar_z.assign(n_out, 0.0);
    bar_z_dot.assign(n_out, 0.0);
    for (std::size_t i = 0; i < n_out; ++i) {
      const ActivationValue phi = activation_eval(act, rec.z[i]);
      bar_z[i] = phi.phi1 * s.bar_a[i] + phi.phi2 * rec.z_dot[i] * s.bar_a_dot[i];
      bar_z_dot[i] = phi.phi1 * s.bar_a_dot[i];
    }

    const auto a_prev = trace.input_a(m);
    const auto a_dot_prev = trace.input_a_dot(m);
    auto& gl = g.layers[m];
    for (std::size_t i = 0; i < n_out; ++i) {
      for (std::size_t j = 0; j < n_in; ++j)
        gl.d_weights(i, j) += bar_z[i] * a_prev[j] + bar_z_dot[i] * a_dot_prev[j];
      gl.d_biases[i] += bar_z[i];
    }
    if (stats) stats->layer_ops += 1;

    if (m == 0) break;
    AdjointState prev{std::vector<double>(n_in, 0.0), std::vector<double>(n_in, 0.0)};
    for (std::size_t i = 0; i < n_out; ++i) {
      for (std::size_t j = 0; j < n_in; ++j) {
        prev.bar_a[j] += layer.weights(i, j) * bar_z[i];
        prev.bar_a_dot[j] += layer.weights(i, j) * bar_z_dot[i];
      }
    }
    if (stats) stats->layer_ops += 1;
    s = std::move(prev);
  }
  if (stats) stats->points += 1;
}

inline Gradients gradient_adjoint(const MlpParams& params, const Problem& problem,
                                  AdjointStats* stats = nullptr) {
  check_params(params);
  return accumulate_loss_gradient(
      params, problem, [&](const DualTrace& trace, double w_y, double w_y_dot, Gradients& g) {
        adjoint_accumulate_point(params, trace, w_y, w_y_dot, g, stats);
      });
}

}  // namespace pinn
