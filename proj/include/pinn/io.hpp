#pragma once
/**
 * @file io.hpp
 * @brief Text artifacts: parameter checkpoints (JSON), loss history (CSV),
 * validation metrics (JSON) and plot data (CSV).
 *
 * Reals are written with 17 significant digits, which round-trips every
 * double exactly. Key order is fixed, so identical inputs give identical bytes.
 */

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pinn/errors.hpp"
#include "pinn/net.hpp"
#include "pinn/train.hpp"
#include "pinn/validate.hpp"

namespace pinn {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kCheckpointFormatVersion = 1;

using Json = nlohmann::ordered_json;

/// 17 significant digits, "%.17g" style. Integral values keep a trailing ".0".
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline void write_json_value(std::ostream& os, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) { os << "{}"; return; }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(it.key()).dump() << ": ";
        write_json_value(os, it.value(), indent, depth + 1);
      }
      os << "\n" << close_pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) { os << "[]"; return; }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_json_value(os, j[i], indent, depth + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_json_value(os, j[i], indent, depth + 1);
      }
      os << "\n" << close_pad << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) throw IoError("cannot serialize non-finite value to JSON");
      os << format_real(v);
      return;
    }
    default:
      os << j.dump();
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline double parse_real(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError(where + ": cannot parse number '" + s + "'");
  return v;
}

inline double json_real(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(where + ": non-finite value");
  return v;
}

inline const Json& json_field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

}  // namespace detail

/// Pretty-printed JSON with 17-digit reals and a trailing newline.
inline std::string to_json_text(const Json& j) {
  std::ostringstream os;
  detail::write_json_value(os, j, 2, 0);
  os << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Checkpoint

struct Checkpoint {
  MlpParams params;
  std::optional<std::uint64_t> seed;
};

inline Json checkpoint_to_json(const MlpParams& params, std::optional<std::uint64_t> seed = {}) {
  check_params(params);
  Json j;
  j["format_version"] = kCheckpointFormatVersion;
  j["arch"] = params.arch();
  j["activation"] = std::string(to_string(params.activation));
  Json layers = Json::array();
  for (const auto& layer : params.layers) {
    Json w = Json::array();
    for (std::size_t i = 0; i < layer.weights.rows; ++i) {
      Json row = Json::array();
      for (std::size_t c = 0; c < layer.weights.cols; ++c) row.push_back(layer.weights(i, c));
      w.push_back(std::move(row));
    }
    Json l;
    l["weights"] = std::move(w);
    l["biases"] = layer.biases;
    layers.push_back(std::move(l));
  }
  j["layers"] = std::move(layers);
  if (seed) j["seed"] = *seed;
  return j;
}

/// Validates every field; ParseError messages name the offending field path.
inline Checkpoint checkpoint_from_json(const Json& j) {
  using detail::json_field;
  const Json& version = json_field(j, "format_version", "checkpoint");
  if (!version.is_number_integer()) throw ParseError("checkpoint.format_version: expected an integer");
  if (version.get<int>() != kCheckpointFormatVersion)
    throw ParseError("checkpoint.format_version: unsupported version " + std::to_string(version.get<int>()) +
                     " (expected " + std::to_string(kCheckpointFormatVersion) + ")");

  const Json& arch_j = json_field(j, "arch", "checkpoint");
  if (!arch_j.is_array()) throw ParseError("checkpoint.arch: expected an array");
  std::vector<std::size_t> arch;
  for (std::size_t i = 0; i < arch_j.size(); ++i) {
    if (!arch_j[i].is_number_unsigned())
      throw ParseError("checkpoint.arch[" + std::to_string(i) + "]: expected a non-negative integer");
    arch.push_back(arch_j[i].get<std::size_t>());
  }

  const Json& act_j = json_field(j, "activation", "checkpoint");
  if (!act_j.is_string()) throw ParseError("checkpoint.activation: expected a string");
  Checkpoint cp;
  try {
    cp.params.activation = activation_from_string(act_j.get<std::string>());
  } catch (const ConfigError& e) {
    throw ParseError(std::string("checkpoint.activation: ") + e.what());
  }

  const Json& layers_j = json_field(j, "layers", "checkpoint");
  if (!layers_j.is_array()) throw ParseError("checkpoint.layers: expected an array");
  if (arch.size() != layers_j.size() + 1)
    throw ParseError("checkpoint.arch: " + std::to_string(arch.size()) + " widths for " +
                     std::to_string(layers_j.size()) + " layers");

  for (std::size_t l = 0; l < layers_j.size(); ++l) {
    const std::string where = "checkpoint.layers[" + std::to_string(l) + "]";
    const Json& w_j = json_field(layers_j[l], "weights", where);
    const Json& b_j = json_field(layers_j[l], "biases", where);
    if (!w_j.is_array()) throw ParseError(where + ".weights: expected an array of rows");
    if (!b_j.is_array()) throw ParseError(where + ".biases: expected an array");
    const std::size_t rows = w_j.size();
    const std::size_t cols = rows ? (w_j[0].is_array() ? w_j[0].size() : 0) : 0;
    if (rows != arch[l + 1] || cols != arch[l])
      throw ParseError(where + ".weights: shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                       " does not match arch (" + std::to_string(arch[l + 1]) + "x" + std::to_string(arch[l]) + ")");
    LayerParams layer{Matrix(rows, cols), {}};
    for (std::size_t r = 0; r < rows; ++r) {
      const std::string rw = where + ".weights[" + std::to_string(r) + "]";
      if (!w_j[r].is_array() || w_j[r].size() != cols) throw ParseError(rw + ": ragged row");
      for (std::size_t c = 0; c < cols; ++c)
        layer.weights(r, c) = detail::json_real(w_j[r][c], rw + "[" + std::to_string(c) + "]");
    }
    if (b_j.size() != rows)
      throw ParseError(where + ".biases: length " + std::to_string(b_j.size()) + " does not match " +
                       std::to_string(rows) + " weight rows");
    for (std::size_t r = 0; r < rows; ++r)
      layer.biases.push_back(detail::json_real(b_j[r], where + ".biases[" + std::to_string(r) + "]"));
    cp.params.layers.push_back(std::move(layer));
  }

  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) throw ParseError("checkpoint.seed: expected a non-negative integer");
    cp.seed = it->get<std::uint64_t>();
  }
  try {
    check_params(cp.params);
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("checkpoint: ") + e.what());
  }
  return cp;
}

inline void write_checkpoint(const MlpParams& params, const std::filesystem::path& path,
                             std::optional<std::uint64_t> seed = {}) {
  detail::write_text_file(path, to_json_text(checkpoint_to_json(params, seed)));
}

inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

inline Checkpoint read_checkpoint(const std::filesystem::path& path) {
  const Json j = parse_json_text(detail::read_text_file(path), path.string());
  try {
    return checkpoint_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Loss history

inline std::string history_to_csv(const LossHistory& h) {
  if (h.size() == 0) throw ArgumentError("write_history: empty history");
  std::string out = "epoch,l_total,l_r,l_ic\n";
  for (std::size_t i = 0; i < h.size(); ++i) {
    out += std::to_string(h.epochs[i]);
    out += ',' + format_real(h.l_total[i]) + ',' + format_real(h.l_r[i]) + ',' + format_real(h.l_ic[i]) + '\n';
  }
  return out;
}

inline void write_history(const LossHistory& h, const std::filesystem::path& path) {
  detail::write_text_file(path, history_to_csv(h));
}

inline LossHistory history_from_csv(const std::string& text, const std::string& source = "history") {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || detail::split(line, ',') != std::vector<std::string>{"epoch", "l_total", "l_r", "l_ic"})
    throw ParseError(source + ": line 1: expected header 'epoch,l_total,l_r,l_ic'");
  LossHistory h;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cols = detail::split(line, ',');
    const std::string where = source + ": line " + std::to_string(lineno);
    if (cols.size() != 4) throw ParseError(where + ": expected 4 columns, got " + std::to_string(cols.size()));
    int epoch = 0;
    auto res = std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), epoch);
    if (res.ec != std::errc() || res.ptr != cols[0].data() + cols[0].size())
      throw ParseError(where + ": bad epoch '" + cols[0] + "'");
    if (!h.epochs.empty() && epoch <= h.epochs.back()) throw ParseError(where + ": epochs not strictly increasing");
    h.epochs.push_back(epoch);
    h.l_total.push_back(detail::parse_real(cols[1], where));
    h.l_r.push_back(detail::parse_real(cols[2], where));
    h.l_ic.push_back(detail::parse_real(cols[3], where));
  }
  return h;
}

inline LossHistory read_history(const std::filesystem::path& path) {
  return history_from_csv(detail::read_text_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Metrics

inline Json metrics_to_json(const Metrics& m, const Json& config_echo = Json::object()) {
  Json j;
  j["code_version"] = kVersion;
  j["config"] = config_echo;
  j["n_eval"] = m.n_eval;
  j["domain"] = Json::array({m.t_min, m.t_max});
  j["mse"] = m.mse;
  j["rel_l2"] = m.rel_l2;
  j["max_abs_err"] = m.max_abs_err;
  j["max_err_location"] = m.max_err_location;
  j["mean_abs_err"] = m.mean_abs_err;
  j["std_abs_err"] = m.std_abs_err;
  Json pts = Json::array();
  for (const auto& p : m.pointwise) {
    Json e;
    e["t"] = p.t;
    e["y_hat"] = p.y_hat;
    e["y_exact"] = p.y_exact;
    e["abs_err"] = p.abs_err;
    pts.push_back(std::move(e));
  }
  j["pointwise"] = std::move(pts);
  return j;
}

inline Metrics metrics_from_json(const Json& j) {
  using detail::json_field;
  using detail::json_real;
  Metrics m;
  const Json& n = json_field(j, "n_eval", "metrics");
  if (!n.is_number_integer()) throw ParseError("metrics.n_eval: expected an integer");
  m.n_eval = n.get<int>();
  const Json& dom = json_field(j, "domain", "metrics");
  if (!dom.is_array() || dom.size() != 2) throw ParseError("metrics.domain: expected [t_min, t_max]");
  m.t_min = json_real(dom[0], "metrics.domain[0]");
  m.t_max = json_real(dom[1], "metrics.domain[1]");
  m.mse = json_real(json_field(j, "mse", "metrics"), "metrics.mse");
  m.rel_l2 = json_real(json_field(j, "rel_l2", "metrics"), "metrics.rel_l2");
  m.max_abs_err = json_real(json_field(j, "max_abs_err", "metrics"), "metrics.max_abs_err");
  m.max_err_location = json_real(json_field(j, "max_err_location", "metrics"), "metrics.max_err_location");
  m.mean_abs_err = json_real(json_field(j, "mean_abs_err", "metrics"), "metrics.mean_abs_err");
  m.std_abs_err = json_real(json_field(j, "std_abs_err", "metrics"), "metrics.std_abs_err");
  const Json& pts = json_field(j, "pointwise", "metrics");
  if (!pts.is_array()) throw ParseError("metrics.pointwise: expected an array");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string w = "metrics.pointwise[" + std::to_string(i) + "]";
    m.pointwise.push_back({json_real(json_field(pts[i], "t", w), w + ".t"),
                           json_real(json_field(pts[i], "y_hat", w), w + ".y_hat"),
                           json_real(json_field(pts[i], "y_exact", w), w + ".y_exact"),
                           json_real(json_field(pts[i], "abs_err", w), w + ".abs_err")});
  }
  return m;
}

inline void write_metrics(const Metrics& m, const std::filesystem::path& path,
                          const Json& config_echo = Json::object()) {
  detail::write_text_file(path, to_json_text(metrics_to_json(m, config_echo)));
}

inline Metrics read_metrics(const std::filesystem::path& path) {
  const Json j = parse_json_text(detail::read_text_file(path), path.string());
  try {
    return metrics_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Plot data

inline std::string plotdata_to_csv(const std::vector<PointError>& grid) {
  std::string out = "t,y_hat,y_exact,abs_err\n";
  for (const auto& p : grid)
    out += format_real(p.t) + ',' + format_real(p.y_hat) + ',' + format_real(p.y_exact) + ',' +
           format_real(p.abs_err) + '\n';
  return out;
}

/// t,y_hat,y_exact,abs_err on the uniform n_eval grid.
inline void write_plotdata(const MlpParams& params, int n_eval, const std::filesystem::path& path,
                           double t_min = 0.0, double t_max = 1.0) {
  detail::write_text_file(path, plotdata_to_csv(evaluation_grid(params, n_eval, t_min, t_max)));
}

inline std::vector<PointError> read_plotdata(const std::filesystem::path& path) {
  std::istringstream in(detail::read_text_file(path));
  std::string line;
  if (!std::getline(in, line) || detail::split(line, ',') != std::vector<std::string>{"t", "y_hat", "y_exact", "abs_err"})
    throw ParseError(path.string() + ": line 1: expected header 't,y_hat,y_exact,abs_err'");
  std::vector<PointError> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cols = detail::split(line, ',');
    const std::string where = path.string() + ": line " + std::to_string(lineno);
    if (cols.size() != 4) throw ParseError(where + ": expected 4 columns");
    out.push_back({detail::parse_real(cols[0], where), detail::parse_real(cols[1], where),
                   detail::parse_real(cols[2], where), detail::parse_real(cols[3], where)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Run configuration

inline Json config_to_json(const TrainConfig& cfg) {
  Json j;
  j["arch"] = cfg.arch;
  j["activation"] = std::string(to_string(cfg.activation));
  j["seed"] = cfg.seed;
  j["nc"] = cfg.n_collocation;
  j["t_min"] = cfg.t_min;
  j["t_max"] = cfg.t_max;
  j["t_ic"] = cfg.t_ic;
  j["y_ic"] = cfg.y_ic;
  j["lambda"] = cfg.lambda;
  j["epochs"] = cfg.epochs;
  j["optimizer"] = std::string(to_string(cfg.optimizer));
  j["lr"] = cfg.eta;
  j["engine"] = std::string(to_string(cfg.engine));
  j["history_stride"] = cfg.history_stride;
  return j;
}

/// Overlays the keys present in `j` onto `cfg`. Unknown keys are rejected.
inline TrainConfig apply_config_json(TrainConfig cfg, const Json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const Json& v = it.value();
      if (k == "arch") cfg.arch = v.get<std::vector<std::size_t>>();
      else if (k == "activation") cfg.activation = activation_from_string(v.get<std::string>());
      else if (k == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (k == "nc") cfg.n_collocation = v.get<int>();
      else if (k == "t_min") cfg.t_min = v.get<double>();
      else if (k == "t_max") cfg.t_max = v.get<double>();
      else if (k == "t_ic") cfg.t_ic = v.get<double>();
      else if (k == "y_ic") cfg.y_ic = v.get<double>();
      else if (k == "lambda") cfg.lambda = v.get<double>();
      else if (k == "epochs") cfg.epochs = v.get<int>();
      else if (k == "optimizer") cfg.optimizer = optimizer_from_string(v.get<std::string>());
      else if (k == "lr") cfg.eta = v.get<double>();
      else if (k == "engine") cfg.engine = engine_from_string(v.get<std::string>());
      else if (k == "history_stride") cfg.history_stride = v.get<int>();
      else throw ConfigError("config: unknown key '" + k + "'");
    }
  } catch (const nlohmann::json::type_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

}  // namespace pinn
