#pragma once
/**
 * @file validate.hpp
 * @brief Comparison of the trained network against y(t) = exp(-t).
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "pinn/dual.hpp"
#include "pinn/errors.hpp"
#include "pinn/net.hpp"
#include "pinn/train.hpp"

namespace pinn {

inline double exact_solution(double t) {
  if (!std::isfinite(t)) throw DomainError("exact_solution: non-finite t");
  return std::exp(-t);
}

struct PointError {
  double t;
  double y_hat;
  double y_exact;
  double abs_err;
};

struct Metrics {
  double mse = 0.0;
  double rel_l2 = 0.0;
  double max_abs_err = 0.0;
  double max_err_location = 0.0;
  double mean_abs_err = 0.0;
  double std_abs_err = 0.0;  // population standard deviation
  int n_eval = 0;
  double t_min = 0.0;
  double t_max = 1.0;
  std::vector<PointError> pointwise;  // representative points, see validate()
};

inline PointError point_error(const MlpParams& params, double t) {
  const double y_hat = forward_dual(params, t).y_hat;
  const double y = exact_solution(t);
  return {t, y_hat, y, std::abs(y_hat - y)};
}

/// Prediction vs exact solution on the uniform n_eval grid (endpoints included).
inline std::vector<PointError> evaluation_grid(const MlpParams& params, int n_eval, double t_min,
                                               double t_max) {
  if (n_eval < 2) throw ArgumentError("validate: n_eval must be >= 2");
  std::vector<PointError> out;
  out.reserve(static_cast<std::size_t>(n_eval));
  for (double t : collocation_grid(n_eval, t_min, t_max)) out.push_back(point_error(params, t));
  return out;
}

/// Aggregate metrics over `grid`. Ties for the maximum keep the first location.
inline Metrics metrics_from_grid(const std::vector<PointError>& grid) {
  if (grid.empty()) throw ArgumentError("metrics_from_grid: empty grid");
  Metrics m;
  double sq_err = 0.0;
  double sq_ref = 0.0;
  double sum_abs = 0.0;
  for (const auto& p : grid) {
    const double d = p.y_hat - p.y_exact;
    sq_err += d * d;
    sq_ref += p.y_exact * p.y_exact;
    sum_abs += p.abs_err;
    if (p.abs_err > m.max_abs_err) {
      m.max_abs_err = p.abs_err;
      m.max_err_location = p.t;
    }
  }
  const double n = static_cast<double>(grid.size());
  m.mse = sq_err / n;
  m.rel_l2 = std::sqrt(sq_err) / std::sqrt(sq_ref);
  m.mean_abs_err = sum_abs / n;
  double var = 0.0;
  for (const auto& p : grid) var += (p.abs_err - m.mean_abs_err) * (p.abs_err - m.mean_abs_err);
  m.std_abs_err = std::sqrt(var / n);
  m.n_eval = static_cast<int>(grid.size());
  m.t_min = grid.front().t;
  m.t_max = grid.back().t;
  if (m.max_abs_err == 0.0) m.max_err_location = grid.front().t;
  return m;
}

/// Fractions of the domain reported in the pointwise table.
inline constexpr std::array<double, 5> kReportFractions{0.0, 0.25, 0.5, 0.75, 1.0};

inline Metrics validate(const MlpParams& params, int n_eval = 500, double t_min = 0.0, double t_max = 1.0) {
  check_params(params);
  Metrics m = metrics_from_grid(evaluation_grid(params, n_eval, t_min, t_max));
  for (double f : kReportFractions) m.pointwise.push_back(point_error(params, t_min + f * (t_max - t_min)));
  return m;
}

}  // namespace pinn
