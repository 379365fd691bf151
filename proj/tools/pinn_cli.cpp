// pinn command-line entry point: verify | train | validate | export.
//
// Exit codes: 0 success, 1 verification/threshold/training failure,
// 2 usage or configuration error, 3 I/O or parse error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pinn/pinn.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

// ---------------------------------------------------------------- verify

struct VerifyOpts {
  bool gradients = false;
  std::string json_out;
  bool json = false;
  std::string engine = "sensitivity";
};

int cmd_verify(const VerifyOpts& o) {
  const auto targets = pinn::worked_example_targets();
  const auto rep = pinn::run_verification(targets, pinn::engine_from_string(o.engine), o.gradients);

  const bool json_to_stdout = o.json && (o.json_out.empty() || o.json_out == "-");
  if (o.json) {
    const std::string text = pinn::to_json_text(pinn::report_to_json(rep));
    if (json_to_stdout)
      std::cout << text;
    else
      pinn::detail::write_text_file(o.json_out, text);
  }
  if (json_to_stdout) return rep.all_pass() ? kExitOk : kExitFail;

  std::cout << pinn::format_report(rep, targets);
  if (o.gradients) {
    // Every gradient entry from all three engines, canonical parameter order.
    const auto params = pinn::init_worked_example_params();
    const auto problem = pinn::worked_example_problem();
    const auto gs = pinn::gradient_full(params, problem).flat();
    const auto ga = pinn::gradient_adjoint(params, problem).flat();
    const auto gf = pinn::gradient_findiff(params, problem).flat();
    std::printf("\nAll %zu gradient entries (layer-major, weights row-major, then biases)\n", gs.size());
    std::printf("   k      sensitivity          adjoint          findiff\n");
    for (std::size_t k = 0; k < gs.size(); ++k)
      std::printf("  %2zu  %15.10f  %15.10f  %15.10f\n", k, gs[k], ga[k], gf[k]);
  }
  return rep.all_pass() ? kExitOk : kExitFail;
}

// ----------------------------------------------------------------- train

struct TrainOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs;
  std::optional<int> nc;
  std::optional<double> lambda;
  std::optional<double> lr;
  std::optional<std::string> optimizer;
  std::optional<std::string> engine;
  std::optional<int> history_stride;
  std::vector<std::size_t> arch;
  std::string out_dir = "run";
  int n_eval = 500;
  bool quiet = false;
  bool verbose = false;
};

pinn::TrainConfig resolve_config(const TrainOpts& o) {
  pinn::TrainConfig cfg;
  if (!o.config_path.empty()) {
    const auto j = pinn::parse_json_text(pinn::detail::read_text_file(o.config_path), o.config_path);
    cfg = pinn::apply_config_json(cfg, j);
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.epochs) cfg.epochs = *o.epochs;
  if (o.nc) cfg.n_collocation = *o.nc;
  if (o.lambda) cfg.lambda = *o.lambda;
  if (o.lr) cfg.eta = *o.lr;
  if (o.optimizer) cfg.optimizer = pinn::optimizer_from_string(*o.optimizer);
  if (o.engine) cfg.engine = pinn::engine_from_string(*o.engine);
  if (o.history_stride) cfg.history_stride = *o.history_stride;
  if (!o.arch.empty()) cfg.arch = o.arch;
  pinn::check_config(cfg);
  return cfg;
}

/// Epochs 1, E/5, 2E/5, ..., E, restricted to recorded epochs.
void print_loss_table(const pinn::LossHistory& h, int epochs) {
  std::vector<int> wanted{1};
  for (int k = 1; k <= 5; ++k) wanted.push_back(static_cast<int>(static_cast<long long>(epochs) * k / 5));
  std::printf("%8s  %14s  %12s  %12s\n", "Epoch", "Total Loss L", "L_R", "L_IC");
  int last = 0;
  for (int e : wanted) {
    if (e < 1 || e <= last) continue;
    last = e;
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h.epochs[i] != e) continue;
      std::printf("%8d  %14.3e  %12.3e  %12.3e\n", e, h.l_total[i], h.l_r[i], h.l_ic[i]);
    }
  }
}

int cmd_train(const TrainOpts& o) {
  const pinn::TrainConfig cfg = resolve_config(o);
  pinn::TrainObserver observer;
  if (o.verbose) {
    observer = [](int epoch, const pinn::LossBreakdown& l) {
      std::fprintf(stderr, "epoch %d  L=%.6e  L_R=%.6e  L_IC=%.6e\n", epoch, l.l_total, l.l_r, l.l_ic);
    };
  }
  pinn::TrainResult result;
  try {
    result = pinn::train(cfg, observer);
  } catch (const pinn::DivergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }

  const fs::path dir(o.out_dir);
  pinn::write_checkpoint(result.params, dir / "checkpoint.json", cfg.seed);
  pinn::write_history(result.history, dir / "history.csv");
  const pinn::Metrics m = pinn::validate(result.params, o.n_eval, cfg.t_min, cfg.t_max);
  pinn::write_metrics(m, dir / "metrics.json", pinn::config_to_json(cfg));

  if (!o.quiet) {
    print_loss_table(result.history, cfg.epochs);
    std::printf("\nrelative L2 error on %d points: %.3e\n", o.n_eval, m.rel_l2);
    std::printf("wrote %s, %s, %s\n", (dir / "checkpoint.json").string().c_str(),
                (dir / "history.csv").string().c_str(), (dir / "metrics.json").string().c_str());
  }
  return kExitOk;
}

// -------------------------------------------------------------- validate

void print_metrics(const pinn::Metrics& m) {
  std::printf("%-32s %s\n", "Metric", "Value");
  std::printf("%-32s %.3e\n", "Mean Squared Error (MSE)", m.mse);
  std::printf("%-32s %.3e\n", "Relative L2 Error", m.rel_l2);
  std::printf("%-32s %.3e  (t = %.4f)\n", "Maximum Absolute Error", m.max_abs_err, m.max_err_location);
  std::printf("%-32s %.3e\n", "Mean Absolute Error", m.mean_abs_err);
  std::printf("%-32s %.3e\n", "Std. of Absolute Error", m.std_abs_err);
  std::printf("\n%6s  %12s  %14s  %14s\n", "t", "y_hat (PINN)", "y(t) (Exact)", "Absolute Error");
  for (const auto& p : m.pointwise)
    std::printf("%6.2f  %12.6f  %14.6f  %14.3e\n", p.t, p.y_hat, p.y_exact, p.abs_err);
}

struct ValidateOpts {
  std::string checkpoint;
  int n_eval = 500;
  std::string out_dir;
  double threshold = 1e-3;
  bool no_threshold = false;
};

int cmd_validate(const ValidateOpts& o) {
  const auto cp = pinn::read_checkpoint(o.checkpoint);
  const pinn::Metrics m = pinn::validate(cp.params, o.n_eval);
  const fs::path dir = o.out_dir.empty() ? fs::path(o.checkpoint).parent_path() : fs::path(o.out_dir);
  pinn::Json echo;
  echo["n_eval"] = o.n_eval;
  if (cp.seed) echo["seed"] = *cp.seed;
  pinn::write_metrics(m, dir / "metrics.json", echo);
  pinn::write_plotdata(cp.params, o.n_eval, dir / "plotdata.csv");
  print_metrics(m);
  if (!o.no_threshold && !(m.rel_l2 <= o.threshold)) {
    std::printf("\nFAIL: relative L2 error %.3e exceeds threshold %.1e\n", m.rel_l2, o.threshold);
    return kExitFail;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- export

struct ExportOpts {
  std::string checkpoint;
  int n_eval = 500;
  std::string metrics_path;
  std::string plotdata_path;
};

int cmd_export(const ExportOpts& o) {
  const auto cp = pinn::read_checkpoint(o.checkpoint);
  if (!o.metrics_path.empty()) {
    pinn::Json echo;
    echo["n_eval"] = o.n_eval;
    if (cp.seed) echo["seed"] = *cp.seed;
    pinn::write_metrics(pinn::validate(cp.params, o.n_eval), o.metrics_path, echo);
  }
  if (!o.plotdata_path.empty()) pinn::write_plotdata(cp.params, o.n_eval, o.plotdata_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physics-informed MLP for y' + y = 0: verification, training and validation"};
  app.require_subcommand(1, 1);

  VerifyOpts vo;
  auto* verify = app.add_subcommand("verify", "Recompute the hand-worked 1-3-3-1 example and check it");
  verify->add_flag("--gradients", vo.gradients, "Also check dL_R/dL_IC components and list all gradients");
  auto* json_opt = verify->add_option("--json", vo.json_out, "Emit a JSON report (to stdout, or to the given path)")
                       ->expected(0, 1);
  verify->add_option("--engine", vo.engine, "Gradient engine")
      ->check(CLI::IsMember({"sensitivity", "adjoint", "findiff"}));

  TrainOpts to;
  auto* train = app.add_subcommand("train", "Train from a random initialization and write run artifacts");
  train->add_option("--config", to.config_path, "JSON config file (flags override it)");
  train->add_option("--seed", to.seed, "PRNG seed");
  train->add_option("--epochs", to.epochs, "Number of epochs");
  train->add_option("--nc", to.nc, "Number of collocation points");
  train->add_option("--lambda", to.lambda, "Initial-condition weight");
  train->add_option("--lr", to.lr, "Learning rate");
  train->add_option("--optimizer", to.optimizer, "adam | gd")->check(CLI::IsMember({"adam", "gd"}));
  train->add_option("--engine", to.engine, "Gradient engine")
      ->check(CLI::IsMember({"sensitivity", "adjoint", "findiff"}));
  train->add_option("--history-stride", to.history_stride, "Epochs between history records");
  train->add_option("--arch", to.arch, "Layer widths, e.g. 1,3,3,1")->delimiter(',');
  train->add_option("--out-dir", to.out_dir, "Output directory")->capture_default_str();
  train->add_option("--n-eval", to.n_eval, "Validation grid size")->capture_default_str();
  auto* quiet = train->add_flag("--quiet", to.quiet, "Suppress the loss table");
  auto* verbose = train->add_flag("--verbose", to.verbose, "Print every recorded epoch to stderr");
  quiet->excludes(verbose);

  ValidateOpts va;
  auto* validate = app.add_subcommand("validate", "Evaluate a checkpoint against exp(-t)");
  validate->add_option("--checkpoint", va.checkpoint, "Checkpoint JSON")->required();
  validate->add_option("--n-eval", va.n_eval, "Evaluation grid size")->capture_default_str();
  validate->add_option("--out-dir", va.out_dir, "Where to write metrics.json and plotdata.csv");
  auto* thr = validate->add_option("--threshold", va.threshold, "Fail if relative L2 error exceeds this")
                  ->capture_default_str();
  auto* nothr = validate->add_flag("--no-threshold", va.no_threshold, "Never fail on accuracy");
  thr->excludes(nothr);

  ExportOpts eo;
  auto* exp = app.add_subcommand("export", "Write metrics and/or plot data for a checkpoint");
  exp->add_option("--checkpoint", eo.checkpoint, "Checkpoint JSON")->required();
  exp->add_option("--n-eval", eo.n_eval, "Evaluation grid size")->capture_default_str();
  exp->add_option("--metrics", eo.metrics_path, "Metrics JSON output path");
  exp->add_option("--plotdata", eo.plotdata_path, "Plot data CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*verify) {
      vo.json = json_opt->count() > 0;
      return cmd_verify(vo);
    }
    if (*train) return cmd_train(to);
    if (*validate) return cmd_validate(va);
    if (*exp) {
      if (eo.metrics_path.empty() && eo.plotdata_path.empty()) {
        std::fprintf(stderr, "error: export needs --metrics and/or --plotdata\n");
        return kExitUsage;
      }
      return cmd_export(eo);
    }
  } catch (const pinn::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const pinn::ArgumentError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const pinn::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const pinn::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const pinn::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }
  return kExitUsage;
}
