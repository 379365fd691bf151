#pragma once
/**
 * @file train.hpp
 * @brief Full-batch training loop: evaluate loss, gradient, optimizer step.
 */

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "pinn/engine.hpp"
#include "pinn/errors.hpp"
#include "pinn/loss.hpp"
#include "pinn/net.hpp"
#include "pinn/optim.hpp"

namespace pinn {

enum class OptimizerKind { Adam, GD };

inline std::string_view to_string(OptimizerKind k) { return k == OptimizerKind::Adam ? "adam" : "gd"; }

inline OptimizerKind optimizer_from_string(std::string_view s) {
  if (s == "adam") return OptimizerKind::Adam;
  if (s == "gd") return OptimizerKind::GD;
  throw ConfigError("unknown optimizer '" + std::string(s) + "'");
}

struct TrainConfig {
  std::vector<std::size_t> arch{1, 3, 3, 1};
  ActivationKind activation = ActivationKind::Tanh;
  std::uint64_t seed = 0;
  int n_collocation = 30;
  double t_min = 0.0;
  double t_max = 1.0;
  double t_ic = 0.0;
  double y_ic = 1.0;
  double lambda = 10.0;
  int epochs = 15000;
  OptimizerKind optimizer = OptimizerKind::Adam;
  double eta = 1e-3;
  GradientEngine engine = GradientEngine::Adjoint;
  int history_stride = 1;
};

inline void check_config(const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (cfg.n_collocation < 1) throw ConfigError("n_collocation must be >= 1");
  if (!(cfg.t_min < cfg.t_max)) throw ConfigError("domain requires t_min < t_max");
  if (!std::isfinite(cfg.lambda) || cfg.lambda < 0.0) throw ConfigError("lambda must be finite and >= 0");
  if (!std::isfinite(cfg.eta) || cfg.eta < 0.0) throw ConfigError("learning rate must be finite and >= 0");
  if (cfg.history_stride < 1) throw ConfigError("history_stride must be >= 1");
  (void)zero_params(cfg.arch, cfg.activation);  // validates the architecture
}

/// n uniformly spaced points including both endpoints; n = 1 gives {t_min}.
inline std::vector<double> collocation_grid(int n, double t_min, double t_max) {
  if (n < 1) throw ArgumentError("collocation_grid: n must be >= 1");
  std::vector<double> ts(static_cast<std::size_t>(n));
  if (n == 1) {
    ts[0] = t_min;
    return ts;
  }
  const double span = t_max - t_min;
  for (int i = 0; i < n; ++i) ts[static_cast<std::size_t>(i)] = t_min + span * i / (n - 1);
  ts.back() = t_max;
  return ts;
}

inline Problem make_problem(const TrainConfig& cfg) {
  return {cfg.lambda, cfg.t_ic, cfg.y_ic, collocation_grid(cfg.n_collocation, cfg.t_min, cfg.t_max)};
}

struct LossHistory {
  std::vector<int> epochs;
  std::vector<double> l_total;
  std::vector<double> l_r;
  std::vector<double> l_ic;

  std::size_t size() const { return epochs.size(); }
  bool operator==(const LossHistory&) const = default;
};

struct TrainResult {
  MlpParams params;
  LossHistory history;
};

/// Called after each recorded epoch with (epoch, loss) for progress output.
using TrainObserver = std::function<void(int, const LossBreakdown&)>;

/**
 * Epoch e (1-based) evaluates the loss at the current parameters, records
 * it, then applies one full-batch update. Epochs 1 and `epochs` are always
 * recorded, plus every multiple of history_stride.
 */
inline TrainResult train(const TrainConfig& cfg, const TrainObserver& observer = {}) {
  check_config(cfg);
  const Problem problem = make_problem(cfg);
  MlpParams params = init_random(cfg.arch, cfg.seed, cfg.activation);
  AdamState adam = AdamState::for_params(params, cfg.eta);
  const GdConfig gd{cfg.eta};

  LossHistory hist;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const LossBreakdown loss = evaluate_loss(params, problem);
    if (!std::isfinite(loss.l_total))
      throw DivergenceError(epoch, "training diverged: non-finite loss at epoch " + std::to_string(epoch));
    if (epoch == 1 || epoch == cfg.epochs || epoch % cfg.history_stride == 0) {
      hist.epochs.push_back(epoch);
      hist.l_total.push_back(loss.l_total);
      hist.l_r.push_back(loss.l_r);
      hist.l_ic.push_back(loss.l_ic);
      if (observer) observer(epoch, loss);
    }
    const Gradients g = compute_gradient(cfg.engine, params, problem);
    if (cfg.optimizer == OptimizerKind::Adam) {
      auto [next, state] = adam_step(params, g, std::move(adam));
      params = std::move(next);
      adam = std::move(state);
    } else {
      params = gd_step(params, g, gd);
    }
  }
  return {std::move(params), std::move(hist)};
}

/// First recorded epoch whose value is below `threshold`, or -1.
inline int first_epoch_below(const std::vector<int>& epochs, const std::vector<double>& values,
                             double threshold) {
  for (std::size_t i = 0; i < epochs.size(); ++i)
    if (values[i] < threshold) return epochs[i];
  return -1;
}

}  // namespace pinn
