#pragma once
/**
 * @file verify.hpp
 * @brief Recomputes the hand-worked 1-3-3-1 example (t_c = 0.5, lambda = 10)
 * and checks each quantity against its 4-decimal reference value.
 *
 * Reference values were produced from rounded intermediates, so every check
 * uses an absolute tolerance of 2e-3 rather than exact equality.
 */

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "pinn/dual.hpp"
#include "pinn/engine.hpp"
#include "pinn/io.hpp"
#include "pinn/loss.hpp"
#include "pinn/net.hpp"
#include "pinn/optim.hpp"

namespace pinn {

inline constexpr double kWorkedExampleTolerance = 2e-3;

/// One neuron row of a forward table: z, z_dot, a, a_dot.
using NeuronRow = std::array<double, 4>;

struct ForwardTableTarget {
  std::string title;
  double t;
  std::size_t layer;  // 0-based
  std::vector<NeuronRow> rows;
};

struct GradientTarget {
  std::string name;  // 1-based label, e.g. "W3_12"
  ParamRef ref;
  double total;
  double d_lr;   // dL_R/dtheta
  double d_lic;  // dL_IC/dtheta
};

struct WorkedExampleTargets {
  std::vector<ForwardTableTarget> tables;
  double residual = 0.0;
  double l_r = 0.0;
  double l_ic = 0.0;
  double l_total = 0.0;
  std::vector<GradientTarget> gradients;
  double gd_eta = 0.01;
  double updated_w3_12 = 0.0;
};

/// 4-decimal reference values of the worked example.
inline WorkedExampleTargets worked_example_targets() {
  WorkedExampleTargets t;
  t.tables = {
      {"first hidden layer, t = 0.5", 0.5, 0,
       {{0.0000, 0.2000, 0.0000, 0.2000}, {0.0500, -0.5000, 0.0500, -0.4988}, {0.2000, 0.8000, 0.1974, 0.7688}}},
      {"second hidden layer, t = 0.5", 0.5, 1,
       {{0.2837, 0.5540, 0.2763, 0.5117}, {-0.1690, -0.2873, -0.1673, -0.2792}, {0.4547, -0.3123, 0.4257, -0.2559}}},
      {"output layer, t = 0.5", 0.5, 2, {{0.1768, 0.5513, 0.1768, 0.5513}}},
      {"first hidden layer, t = 0", 0.0, 0,
       {{-0.1000, 0.2000, -0.0997, 0.1980}, {0.3000, -0.5000, 0.2913, -0.4576}, {-0.2000, 0.8000, -0.1974, 0.7688}}},
      {"second hidden layer, t = 0", 0.0, 1,
       {{0.0039, 0.5415, 0.0039, 0.5415}, {-0.0226, -0.2802, -0.0226, -0.2801}, {0.6041, -0.2830, 0.5398, -0.2005}}},
      {"output layer, t = 0", 0.0, 2, {{-0.1210, 0.5953, -0.1210, 0.5953}}},
  };
  t.residual = 0.7281;
  t.l_r = 0.5301;
  t.l_ic = 1.2566;
  t.l_total = 13.0961;
  t.gradients = {
      {"W3_12", ParamRef::weight(2, 0, 1), -0.1432, -0.6502, 0.0507},
      {"b3_1", ParamRef::bias(2, 0), -20.9638, 1.4562, -2.2420},
      {"W2_12", ParamRef::weight(1, 0, 1), -6.4399, -0.5619, -0.5878},
      {"b2_1", ParamRef::bias(1, 0), -19.3360, 0.8400, -2.0176},
  };
  t.gd_eta = 0.01;
  t.updated_w3_12 = -0.5986;
#ifdef PINN_VERIFY_PERTURB_TARGET
  // Negative-control build: one deliberately wrong target must be reported as FAIL.
  t.l_total += 0.5;
#endif
  return t;
}

/// Problem of the worked example: one collocation point at 0.5, IC y(0) = 1, lambda = 10.
inline Problem worked_example_problem() { return {10.0, 0.0, 1.0, {0.5}}; }

struct VerifyCheck {
  std::string section;
  std::string name;
  double value;
  double target;
  bool pass;
};

struct VerifyReport {
  GradientEngine engine = GradientEngine::Sensitivity;
  double tolerance = kWorkedExampleTolerance;
  std::vector<VerifyCheck> checks;
  std::vector<DualTrace> traces;  // t = 0.5, t = 0
  double elapsed_seconds = 0.0;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& c : checks) n += c.pass ? 0 : 1;
    return n;
  }
};

inline std::size_t flat_index(const MlpParams& p, const ParamRef& ref) {
  std::size_t k = 0;
  for (std::size_t l = 0; l < ref.layer; ++l) k += p.layers[l].param_count();
  const auto& layer = p.layers[ref.layer];
  if (ref.kind == ParamKind::Weight) return k + ref.row * layer.n_in() + ref.col;
  return k + layer.weights.data.size() + ref.row;
}

/**
 * Runs every check. With `include_components` the gradient section also
 * checks the separate dL_R and dL_IC parts of each golden gradient.
 */
inline VerifyReport run_verification(const WorkedExampleTargets& targets,
                                     GradientEngine engine = GradientEngine::Sensitivity,
                                     bool include_components = false) {
  const auto start = std::chrono::steady_clock::now();
  VerifyReport rep;
  rep.engine = engine;
  const double tol = rep.tolerance;
  auto check = [&](const std::string& section, const std::string& name, double value, double target) {
    rep.checks.push_back({section, name, value, target, std::abs(value - target) <= tol});
  };

  const MlpParams params = init_worked_example_params();
  const Problem problem = worked_example_problem();
  rep.traces = {forward_dual(params, 0.5), forward_dual(params, 0.0)};

  static constexpr std::array<const char*, 4> kCols{"z", "z_dot", "a", "a_dot"};
  for (const auto& table : targets.tables) {
    const DualTrace& tr = table.t == 0.5 ? rep.traces[0] : rep.traces[1];
    const auto& rec = tr.layers[table.layer];
    for (std::size_t j = 0; j < table.rows.size(); ++j) {
      const std::array<double, 4> got{rec.z[j], rec.z_dot[j], rec.a[j], rec.a_dot[j]};
      for (std::size_t c = 0; c < 4; ++c)
        check(table.title, std::string(kCols[c]) + "[" + std::to_string(j + 1) + "]", got[c], table.rows[j][c]);
    }
  }

  const LossBreakdown loss = evaluate_loss(params, problem);
  check("loss", "R(0.5)", loss.residuals[0], targets.residual);
  check("loss", "L_R", loss.l_r, targets.l_r);
  check("loss", "L_IC", loss.l_ic, targets.l_ic);
  check("loss", "L_total", loss.l_total, targets.l_total);

  const Gradients g = compute_gradient(engine, params, problem);
  const auto flat = g.flat();
  std::vector<double> flat_r;
  std::vector<double> flat_ic;
  if (include_components) {
    Problem only_r = problem;
    only_r.lambda = 0.0;
    Problem unit_ic = problem;
    unit_ic.lambda = 1.0;
    flat_r = compute_gradient(engine, params, only_r).flat();
    flat_ic = compute_gradient(engine, params, unit_ic).flat();
    for (std::size_t k = 0; k < flat_ic.size(); ++k) flat_ic[k] -= flat_r[k];
  }
  for (const auto& gt : targets.gradients) {
    const std::size_t k = flat_index(params, gt.ref);
    check("gradients", "dL/d" + gt.name, flat[k], gt.total);
    if (include_components) {
      check("gradients", "dL_R/d" + gt.name, flat_r[k], gt.d_lr);
      check("gradients", "dL_IC/d" + gt.name, flat_ic[k], gt.d_lic);
    }
  }

  const MlpParams updated = gd_step(params, g, GdConfig{targets.gd_eta});
  check("update", "W3_12 after GD step", updated.layers[2].weights(0, 1), targets.updated_w3_12);

  rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

namespace detail {

inline std::string fixed(double v, int decimals = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%*.*f", decimals + 5, decimals, v);
  return buf;
}

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1e", v);
  return buf;
}

}  // namespace detail

/// Human-readable report: forward tables as aligned columns, then one line per scalar check.
inline std::string format_report(const VerifyReport& rep, const WorkedExampleTargets& targets) {
  using detail::fixed;
  std::string out;
  std::size_t idx = 0;
  for (const auto& table : targets.tables) {
    out += "Values at the " + table.title + "\n";
    const bool output_layer = table.layer == 2;
    out += output_layer ? "  j         z     z_dot     y_hat    y_hat'\n"
                        : "  j         z     z_dot         a     a_dot\n";
    for (std::size_t j = 0; j < table.rows.size(); ++j) {
      std::string row = "  " + std::to_string(j + 1) + " ";
      bool ok = true;
      std::string miss;
      for (std::size_t c = 0; c < 4; ++c) {
        const auto& chk = rep.checks[idx++];
        row += fixed(chk.value);
        if (!chk.pass) {
          ok = false;
          miss += " " + chk.name + " target " + fixed(chk.target, 4);
        }
      }
      out += row + "   " + (ok ? "PASS" : "FAIL" + miss) + "\n";
    }
    out += "\n";
  }
  std::string section;
  for (; idx < rep.checks.size(); ++idx) {
    const auto& c = rep.checks[idx];
    if (c.section != section) {
      section = c.section;
      out += "[" + section + "]\n";
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf), "  %-22s = %s   (target %s, |diff| %s)  %s\n", c.name.c_str(),
                  fixed(c.value).c_str(), fixed(c.target).c_str(),
                  detail::sci(std::abs(c.value - c.target)).c_str(), c.pass ? "PASS" : "FAIL");
    out += buf;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "\n%zu checks, %zu failed (tolerance %.0e, engine %s, %.3f s)\n",
                rep.checks.size(), rep.failures(), rep.tolerance, std::string(to_string(rep.engine)).c_str(),
                rep.elapsed_seconds);
  out += buf;
  return out;
}

inline Json report_to_json(const VerifyReport& rep) {
  Json j;
  j["engine"] = std::string(to_string(rep.engine));
  j["tolerance"] = rep.tolerance;
  j["all_pass"] = rep.all_pass();
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json e;
    e["section"] = c.section;
    e["name"] = c.name;
    e["value"] = c.value;
    e["target"] = c.target;
    e["abs_diff"] = std::abs(c.value - c.target);
    e["pass"] = c.pass;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  return j;
}

}  // namespace pinn
