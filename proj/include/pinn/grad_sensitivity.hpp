#pragma once
/**
 * @file grad_sensitivity.hpp
 * @brief Reference gradient engine: per-parameter forward P/Q sensitivity sweeps.
 *
 * For a parameter theta living in layer l, and every neuron j of a layer m >= l,
 *
 *   P_j = d a_j / d theta        Q_j = d a_dot_j / d theta.
 *
 * At the parameter's own layer only neuron i is nonzero. For W(i,k):
 *
 *   P_i = phi'(z_i) a_k
 *   Q_i = phi''(z_i) a_k z_dot_i + phi'(z_i) a_dot_k
 *
 * (a_k, a_dot_k taken from the layer below; a bias uses a_k = 1, a_dot_k = 0).
 * Each later hidden layer m applies
 *
 *   s_j = sum_k W_jk P_k
 *   P_j = phi'(z_j) s_j
 *   Q_j = phi''(z_j) s_j z_dot_j + phi'(z_j) sum_k W_jk Q_k
 *
 * and the identity output layer reads off dy = sum_j W_1j P_j, dy_dot = sum_j W_1j Q_j.
 * The phi'' term is the product rule on a_dot = phi'(z) z_dot; it is present
 * even though the ODE is first order.
 *
 * Cost is one sweep per parameter per evaluation point. grad_adjoint.hpp is
 * the efficient path; this engine exists to be checked against.
 */

#include <cstddef>
#include <string>
#include <vector>

#include "pinn/dual.hpp"
#include "pinn/errors.hpp"
#include "pinn/gradients.hpp"
#include "pinn/loss.hpp"
#include "pinn/net.hpp"

namespace pinn {

enum class ParamKind { Weight, Bias };

/// Identifies one trainable scalar. Indices are 0-based.
struct ParamRef {
  std::size_t layer = 0;
  ParamKind kind = ParamKind::Weight;
  std::size_t row = 0;
  std::size_t col = 0;  // unused for biases

  static ParamRef weight(std::size_t layer, std::size_t row, std::size_t col) {
    return {layer, ParamKind::Weight, row, col};
  }
  static ParamRef bias(std::size_t layer, std::size_t row) { return {layer, ParamKind::Bias, row, 0}; }
};

struct SensitivityState {
  std::size_t layer = 0;  // layer the sensitivities refer to
  std::vector<double> p;
  std::vector<double> q;
};

/// Sensitivities at the parameter's own layer.
inline SensitivityState init_sensitivity(const DualTrace& trace, const MlpParams& params,
                                         const ParamRef& ref) {
  if (ref.layer >= params.depth() || ref.layer >= trace.layers.size())
    throw ArgumentError("init_sensitivity: layer index out of range");
  const auto& layer = params.layers[ref.layer];
  if (ref.row >= layer.n_out()) throw ArgumentError("init_sensitivity: row index out of range");
  if (ref.kind == ParamKind::Weight && ref.col >= layer.n_in())
    throw ArgumentError("init_sensitivity: column index out of range");

  const auto& rec = trace.layers[ref.layer];
  double in_a = 1.0;
  double in_a_dot = 0.0;
  if (ref.kind == ParamKind::Weight) {
    in_a = trace.input_a(ref.layer)[ref.col];
    in_a_dot = trace.input_a_dot(ref.layer)[ref.col];
  }
  const ActivationValue phi = activation_eval(params.activation_of(ref.layer), rec.z[ref.row]);

  SensitivityState s;
  s.layer = ref.layer;
  s.p.assign(layer.n_out(), 0.0);
  s.q.assign(layer.n_out(), 0.0);
  s.p[ref.row] = phi.phi1 * in_a;
  s.q[ref.row] = phi.phi2 * in_a * rec.z_dot[ref.row] + phi.phi1 * in_a_dot;
  return s;
}

/// Advances `state` from layer m-1 to hidden layer m.
inline SensitivityState propagate_sensitivity(const SensitivityState& state, const DualTrace& trace,
                                              const MlpParams& params, std::size_t m) {
  if (m != state.layer + 1) throw ArgumentError("propagate_sensitivity: m must be state.layer + 1");
  if (m + 1 >= params.depth())
    throw ArgumentError("propagate_sensitivity: m must be a hidden layer (use output_sensitivity)");
  const auto& layer = params.layers[m];
  if (state.p.size() != layer.n_in() || state.q.size() != layer.n_in())
    throw ArgumentError("propagate_sensitivity: state width does not match layer input");
  const auto& rec = trace.layers[m];
  const ActivationKind act = params.activation_of(m);

  SensitivityState next;
  next.layer = m;
  next.p.resize(layer.n_out());
  next.q.resize(layer.n_out());
  for (std::size_t j = 0; j < layer.n_out(); ++j) {
    double wp = 0.0;
    double wq = 0.0;
    for (std::size_t k = 0; k < layer.n_in(); ++k) {
      wp += layer.weights(j, k) * state.p[k];
      wq += layer.weights(j, k) * state.q[k];
    }
    const ActivationValue phi = activation_eval(act, rec.z[j]);
    next.p[j] = phi.phi1 * wp;
    next.q[j] = phi.phi2 * wp * rec.z_dot[j] + phi.phi1 * wq;
  }
  return next;
}

struct OutputSensitivity {
  double dy = 0.0;      // d y_hat / d theta
  double dy_dot = 0.0;  // d y_hat' / d theta
};

/**
 * Reads (dy, dy_dot) off a state at the last hidden layer. A state that
 * already sits at the output layer (output-layer parameter) is returned as is.
 */
inline OutputSensitivity output_sensitivity(const SensitivityState& state, const MlpParams& params) {
  const std::size_t out = params.depth() - 1;
  if (state.layer == out) {
    if (state.p.size() != 1) throw ArgumentError("output_sensitivity: output state must be scalar");
    return {state.p[0], state.q[0]};
  }
  if (state.layer + 1 != out)
    throw ArgumentError("output_sensitivity: state must be at the last hidden layer");
  const auto& layer = params.layers[out];
  if (state.p.size() != layer.n_in() || state.q.size() != layer.n_in())
    throw ArgumentError("output_sensitivity: state width does not match output layer");
  OutputSensitivity r;
  for (std::size_t j = 0; j < layer.n_in(); ++j) {
    r.dy += layer.weights(0, j) * state.p[j];
    r.dy_dot += layer.weights(0, j) * state.q[j];
  }
  return r;
}

/// (d y_hat/d theta, d y_hat'/d theta) at the trace's input for one parameter.
inline OutputSensitivity output_derivatives(const DualTrace& trace, const MlpParams& params,
                                            const ParamRef& ref) {
  SensitivityState s = init_sensitivity(trace, params, ref);
  for (std::size_t m = ref.layer + 1; m + 1 < params.depth(); ++m)
    s = propagate_sensitivity(s, trace, params, m);
  return output_sensitivity(s, params);
}

/// Adds w_y * dy/dtheta + w_y_dot * dy'/dtheta for every parameter into `g`.
inline void sensitivity_accumulate_point(const MlpParams& params, const DualTrace& trace,
                                         double w_y, double w_y_dot, Gradients& g) {
  for (std::size_t l = 0; l < params.depth(); ++l) {
    const auto& layer = params.layers[l];
    auto& gl = g.layers[l];
    for (std::size_t i = 0; i < layer.n_out(); ++i) {
      for (std::size_t j = 0; j < layer.n_in(); ++j) {
        const auto d = output_derivatives(trace, params, ParamRef::weight(l, i, j));
        gl.d_weights(i, j) += w_y * d.dy + w_y_dot * d.dy_dot;
      }
      const auto d = output_derivatives(trace, params, ParamRef::bias(l, i));
      gl.d_biases[i] += w_y * d.dy + w_y_dot * d.dy_dot;
    }
  }
}

/// dL/dtheta for every parameter via the P/Q recursions.
inline Gradients gradient_full(const MlpParams& params, const Problem& problem) {
  check_params(params);
  return accumulate_loss_gradient(
      params, problem, [&](const DualTrace& trace, double w_y, double w_y_dot, Gradients& g) {
        sensitivity_accumulate_point(params, trace, w_y, w_y_dot, g);
      });
}

}  // namespace pinn
