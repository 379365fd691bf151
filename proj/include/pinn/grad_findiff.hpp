#pragma once
/**
 * @file grad_findiff.hpp
 * @brief Central finite-difference gradient of evaluate_loss. Test/verification oracle.
 */

#include <cmath>
#include <vector>

#include "pinn/errors.hpp"
#include "pinn/gradients.hpp"
#include "pinn/loss.hpp"
#include "pinn/net.hpp"

namespace pinn {

inline constexpr double kDefaultFindiffStep = 1e-6;

/// (L(theta + h e_k) - L(theta - h e_k)) / 2h, one parameter at a time.
inline Gradients gradient_findiff(const MlpParams& params, const Problem& problem,
                                  double h = kDefaultFindiffStep) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ArgumentError("gradient_findiff: step must be positive");
  check_params(params);
  check_problem(problem);
  std::vector<double> theta = flatten(params);
  std::vector<double> grad(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double saved = theta[k];
    theta[k] = saved + h;
    const double up = evaluate_loss(unflatten(params, theta), problem).l_total;
    theta[k] = saved - h;
    const double down = evaluate_loss(unflatten(params, theta), problem).l_total;
    theta[k] = saved;
    grad[k] = (up - down) / (2.0 * h);
  }
  return Gradients::from_flat(params, grad);
}

}  // namespace pinn
