#pragma once
/**
 * @file loss.hpp
 * @brief Composite physics loss for y' + y = 0 with a single initial condition.
 *
 *   L = (1/N) sum_i R(t_i)^2 + lambda (y_hat(t_ic) - y_ic)^2,   R = y_hat' + y_hat
 *
 * The residual form is fixed. A different ODE would replace `residual` and
 * the per-point loss weights in gradients.hpp.
 */

#include <cmath>
#include <vector>

#include "pinn/dual.hpp"
#include "pinn/errors.hpp"
#include "pinn/net.hpp"

namespace pinn {

struct Problem {
  double lambda = 10.0;
  double t_ic = 0.0;
  double y_ic = 1.0;
  std::vector<double> collocation;
};

inline void check_problem(const Problem& p) {
  if (p.collocation.empty()) throw ArgumentError("Problem: no collocation points");
  if (!std::isfinite(p.lambda) || p.lambda < 0.0)
    throw ArgumentError("Problem: lambda must be finite and non-negative");
  if (!std::isfinite(p.t_ic) || !std::isfinite(p.y_ic))
    throw ArgumentError("Problem: non-finite initial condition");
  for (double t : p.collocation)
    if (!std::isfinite(t)) throw ArgumentError("Problem: non-finite collocation point");
}

struct LossBreakdown {
  double l_r = 0.0;
  double l_ic = 0.0;
  double l_total = 0.0;
  std::vector<double> residuals;
  double y0_hat = 0.0;
};

inline double residual(const DualTrace& trace) { return trace.y_hat_dot + trace.y_hat; }

inline LossBreakdown evaluate_loss(const MlpParams& params, const Problem& problem) {
  check_problem(problem);
  LossBreakdown out;
  out.residuals.reserve(problem.collocation.size());
  double sum = 0.0;
  for (double t : problem.collocation) {
    const double r = residual(forward_dual(params, t));
    out.residuals.push_back(r);
    sum += r * r;
  }
  out.l_r = sum / static_cast<double>(problem.collocation.size());
  out.y0_hat = forward_dual(params, problem.t_ic).y_hat;
  const double e = out.y0_hat - problem.y_ic;
  out.l_ic = e * e;
  out.l_total = out.l_r + problem.lambda * out.l_ic;
  return out;
}

}  // namespace pinn
