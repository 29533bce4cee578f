// hlab: command-line front end for the horizon-law shared library.
// Exit codes: 0 success, 2 bad arguments or malformed input, 3 parameters
// outside a formula's domain, 4 I/O failure.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "horizonlaw.h"
#include "run_config_schema.hpp"

using nlohmann::json;

namespace {

struct CliError {
  int code;
  std::string message;
};

int status_exit_code(hl_status s) {
  switch (s) {
    case HL_OK:
      return 0;
    case HL_ERR_ARGUMENT:
    case HL_ERR_PARSE:
      return 2;
    case HL_ERR_DOMAIN:
    case HL_ERR_RANGE:
    case HL_ERR_CONSTRUCTION:
      return 3;
    default:
      return 4;
  }
}

void check(hl_status s) {
  if (s == HL_OK) return;
  const char* msg = hl_last_error();
  throw CliError{status_exit_code(s), msg && *msg ? msg : "unknown failure"};
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  hl_string_free(s);
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

// Empty cell for values that do not exist in this row.
std::string fmt_opt(double v) { return std::isnan(v) ? "" : fmt(v); }

/* ------------------------------------------------------------------ */
/* Shared options: --config/--seed/--threads/--out/--format             */

struct Common {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out;
  std::optional<std::string> format;
  json config = json::object();
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "JSON run configuration");
  sub->add_option("--seed", c.seed, "random seed (overrides the config)");
  sub->add_option("--threads", c.threads,
                  "worker threads; 0 consults HORIZON_LAW_THREADS");
  sub->add_option("--out", c.out, "output path (default: stdout)");
  sub->add_option("--format", c.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

void load_config(Common& c) {
  if (!c.config_path) return;
  std::ifstream in(*c.config_path);
  if (!in) throw CliError{4, "cannot open config: " + *c.config_path};
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  char* err = nullptr;
  const hl_status s = hl_validate_json(kRunConfigSchema, text.c_str(), &err);
  if (s != HL_OK)
    throw CliError{2, "config " + *c.config_path + ": " + take_string(err)};
  c.config = json::parse(text);
}

json section(const Common& c, const char* name) {
  if (c.config.contains(name) && c.config.at(name).is_object())
    return c.config.at(name);
  return json::object();
}

std::uint64_t effective_seed(const Common& c) {
  if (c.seed) return *c.seed;
  return c.config.value("seed", std::uint64_t{0});
}

int effective_threads(const Common& c) {
  if (c.threads) return *c.threads;
  return c.config.value("threads", 0);
}

std::string effective_out(const Common& c) {
  if (c.out) return *c.out;
  return c.config.value("out", "");
}

std::string effective_format(const Common& c) {
  if (c.format) return *c.format;
  return c.config.value("format", "json");
}

void emit(const Common& c, const std::string& text) {
  const std::string path = effective_out(c);
  if (path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw CliError{4, "cannot open for writing: " + path};
  f << text << "\n";
  f.flush();
  if (!f) throw CliError{4, "write failed: " + path};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw CliError{4, "cannot open for writing: " + path};
  f << text;
  f.flush();
  if (!f) throw CliError{4, "write failed: " + path};
}

/* ------------------------------------------------------------------ */
/* Parameter assembly: defaults < config sections < flags               */

struct LossFlags {
  std::optional<double> k1, k2, eta, lambda0, alpha_z, noise_total;
};

void add_loss_flags(CLI::App* sub, LossFlags& f) {
  sub->add_option("--k1", f.k1, "Lipschitz bound of the target");
  sub->add_option("--k2", f.k2, "quadratic curvature bound");
  sub->add_option("--eta", f.eta, "corrupted-sample fraction");
  sub->add_option("--lambda0", f.lambda0, "leading eigenvalue");
  sub->add_option("--alpha-z", f.alpha_z, "spectrum decay exponent");
  sub->add_option("--noise-total", f.noise_total, "total noise variance");
}

hl_loss_params make_loss(const Common& c, const LossFlags& f) {
  const json sec = section(c, "loss");
  hl_loss_params p;
  p.k1 = f.k1.value_or(sec.value("k1", 1.0));
  p.k2 = f.k2.value_or(sec.value("k2", 0.0));
  p.eta = f.eta.value_or(sec.value("eta", 0.0));
  p.lambda0 = f.lambda0.value_or(sec.value("lambda0", 1.0));
  p.alpha_z = f.alpha_z.value_or(sec.value("alpha_z", 1.5));
  p.noise_total = f.noise_total.value_or(sec.value("noise_total", 0.0));
  return p;
}

struct MappingFlags {
  std::optional<double> c_d;
  std::optional<int> d_total;
};

void add_mapping_flags(CLI::App* sub, MappingFlags& f) {
  sub->add_option("--c-d", f.c_d, "visible dimensions per horizon step");
  sub->add_option("--d-total", f.d_total, "latent dimension cap");
}

std::pair<double, int> make_mapping(const Common& c, const MappingFlags& f,
                                    int default_d_total) {
  const json sec = section(c, "mapping");
  const double c_d = f.c_d.value_or(sec.value("c_d", 1.0));
  const int d_total = f.d_total.value_or(sec.value("d_total", default_d_total));
  return {c_d, d_total};
}

/* ------------------------------------------------------------------ */
/* predict-loss                                                         */

struct PredictArgs {
  Common common;
  LossFlags loss;
  std::optional<double> d, n_regions, d_samples, horizon, threshold;
  std::optional<std::string> regime;
  std::optional<bool> drop_tail;
  std::optional<std::string> sweep;
  MappingFlags mapping;
};

struct LossRow {
  double d = 1.0, n_regions = 1.0, d_samples = 1.0;
  double horizon = std::nan("");  // NaN encodes "not supplied"
  std::string regime;
  double xi = std::nan("");
  double bayes = 0.0, approx = 0.0, total = 0.0;
};

LossRow compute_loss_row(const hl_loss_params& p, double d, double n_regions,
                         double d_samples, double horizon,
                         const std::string& mode, double threshold,
                         bool drop_tail) {
  LossRow row;
  row.d = d;
  row.n_regions = n_regions;
  row.d_samples = d_samples;
  row.horizon = horizon;

  hl_regime regime = HL_REGIME_DENSE;
  hl_regime_mode rmode = HL_MODE_AUTOMATIC;
  if (mode == "auto") {
    if (std::isnan(horizon))
      throw CliError{2,
                     "regime 'auto' needs the horizon field: pass --horizon "
                     "or set predict.horizon"};
    check(hl_classify_regime(d_samples, n_regions, horizon, threshold, &regime,
                             &row.xi));
  } else {
    regime = mode == "dense" ? HL_REGIME_DENSE : HL_REGIME_SCARCE;
    rmode = mode == "dense" ? HL_MODE_DENSE : HL_MODE_SCARCE;
    if (!std::isnan(horizon)) {
      hl_regime ignored;
      check(hl_classify_regime(d_samples, n_regions, horizon, threshold,
                               &ignored, &row.xi));
    }
  }
  row.regime = regime == HL_REGIME_DENSE ? "dense" : "scarce";

  check(hl_bayesian_loss(&p, d, &row.bayes));
  if (regime == HL_REGIME_DENSE)
    check(hl_approx_loss_dense(&p, d, n_regions, d_samples, drop_tail ? 1 : 0,
                               &row.approx));
  else
    check(hl_approx_loss_scarce(&p, d, d_samples, &row.approx));
  check(hl_total_loss(&p, d, n_regions, d_samples, rmode,
                      std::isnan(horizon) ? 0.0 : horizon, threshold,
                      drop_tail ? 1 : 0, &row.total));
  return row;
}

const char* kLossCsvHeader =
    "d,n_regions,d_samples,horizon,regime,xi,bayesian_loss,"
    "approximation_loss,total_loss";

std::string loss_row_csv(const LossRow& r) {
  std::string line;
  line += fmt(r.d) + "," + fmt(r.n_regions) + "," + fmt(r.d_samples) + ",";
  line += fmt_opt(r.horizon) + "," + r.regime + "," + fmt_opt(r.xi) + ",";
  line += fmt(r.bayes) + "," + fmt(r.approx) + "," + fmt(r.total);
  return line;
}

json loss_row_json(const LossRow& r) {
  json o;
  o["d"] = r.d;
  o["n_regions"] = r.n_regions;
  o["d_samples"] = r.d_samples;
  o["horizon"] = std::isnan(r.horizon) ? json(nullptr) : json(r.horizon);
  o["regime"] = r.regime;
  o["xi"] = std::isnan(r.xi) ? json(nullptr) : json(r.xi);
  o["bayesian_loss"] = r.bayes;
  o["approximation_loss"] = r.approx;
  o["total_loss"] = r.total;
  return o;
}

// "d=1..64" -> variable plus an inclusive integer ladder.
std::pair<std::string, std::vector<double>> parse_sweep_range(
    const std::string& text) {
  const auto eq = text.find('=');
  const auto dots = text.find("..");
  if (eq == std::string::npos || dots == std::string::npos || dots < eq)
    throw CliError{2, "sweep must look like VAR=LO..HI, got '" + text + "'"};
  const std::string var = text.substr(0, eq);
  if (var != "d" && var != "H" && var != "N" && var != "D")
    throw CliError{2, "sweep variable must be one of d, H, N, D"};
  long lo = 0, hi = 0;
  try {
    const std::string lo_text = text.substr(eq + 1, dots - eq - 1);
    const std::string hi_text = text.substr(dots + 2);
    std::size_t lo_end = 0, hi_end = 0;
    lo = std::stol(lo_text, &lo_end);
    hi = std::stol(hi_text, &hi_end);
    if (lo_end != lo_text.size() || hi_end != hi_text.size())
      throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw CliError{2, "sweep bounds must be integers, got '" + text + "'"};
  }
  if (lo < 1 || hi < lo)
    throw CliError{2, "sweep needs 1 <= LO <= HI, got '" + text + "'"};
  std::vector<double> values;
  for (long v = lo; v <= hi; ++v) values.push_back(static_cast<double>(v));
  return {var, values};
}

int run_predict(PredictArgs& a) {
  load_config(a.common);
  const json sec = section(a.common, "predict");
  const hl_loss_params p = make_loss(a.common, a.loss);

  const double d = a.d.value_or(sec.value("d", 1.0));
  const double n_regions = a.n_regions.value_or(sec.value("n_regions", 1.0));
  const double d_samples = a.d_samples.value_or(sec.value("d_samples", 1.0));
  const double horizon =
      a.horizon ? *a.horizon : sec.value("horizon", std::nan(""));
  const std::string mode = a.regime.value_or(sec.value("regime", "auto"));
  const double threshold = a.threshold.value_or(sec.value("threshold", 1.0));
  const bool drop_tail =
      a.drop_tail ? *a.drop_tail : sec.value("drop_tail_term", false);
  const std::string sweep =
      a.sweep ? *a.sweep : sec.value("sweep", std::string{});

  if (!sweep.empty()) {
    const auto [var, values] = parse_sweep_range(sweep);
    const auto [c_d, d_total] = make_mapping(a.common, a.mapping, 1 << 20);
    std::string text = kLossCsvHeader;
    for (double v : values) {
      double row_d = d, row_n = n_regions, row_D = d_samples, row_h = horizon;
      if (var == "d") {
        row_d = v;
      } else if (var == "H") {
        row_h = v;
        int mapped = 0;
        check(hl_d_of_horizon(c_d, d_total, static_cast<int>(v), &mapped));
        row_d = mapped;
      } else if (var == "N") {
        row_n = v;
      } else {
        row_D = v;
      }
      text += "\n" + loss_row_csv(compute_loss_row(p, row_d, row_n, row_D,
                                                   row_h, mode, threshold,
                                                   drop_tail));
    }
    emit(a.common, text);
    return 0;
  }

  const LossRow row = compute_loss_row(p, d, n_regions, d_samples, horizon,
                                       mode, threshold, drop_tail);
  if (effective_format(a.common) == "csv")
    emit(a.common, std::string(kLossCsvHeader) + "\n" + loss_row_csv(row));
  else
    emit(a.common, loss_row_json(row).dump(2));
  return 0;
}

/* ------------------------------------------------------------------ */
/* optimal-horizon                                                      */

struct SolverArgs {
  Common common;
  LossFlags loss;
  MappingFlags mapping;
  std::optional<std::string> method;
  std::optional<double> n_regions, d_samples;
  std::optional<int> d_min, d_max;
  std::optional<std::string> numeric_regime;
  std::optional<std::string> scarce_form;
  std::optional<bool> drop_tail;
};

struct SolverSettings {
  double n_regions = 1.0;
  double d_samples = 1.0;
  int d_min = 1;
  int d_max = 4096;
  std::string numeric_regime = "dense";
  int scarce_form = 0;
  bool drop_tail = false;
  double c_d = 1.0;
  int d_total = 4096;
};

json solve_one(const std::string& method, const hl_loss_params& p,
               const SolverSettings& s, bool table_mode) {
  hl_optimal_result r;
  hl_status st = HL_OK;
  if (method == "small_model") {
    st = hl_optimal_d_small_model(&p, s.n_regions, &r);
  } else if (method == "large_model") {
    st = hl_optimal_d_large_model(&p, s.n_regions, s.d_samples, &r);
  } else if (method == "scarce") {
    st = hl_optimal_d_scarce(&p, s.d_samples, s.scarce_form, &r);
  } else {
    const hl_regime regime =
        s.numeric_regime == "dense" ? HL_REGIME_DENSE : HL_REGIME_SCARCE;
    st = hl_optimal_d_numeric(&p, s.n_regions, s.d_samples, regime, s.d_min,
                              s.d_max, s.drop_tail ? 1 : 0, &r);
  }
  if (st != HL_OK) {
    if (!table_mode) check(st);
    const char* msg = hl_last_error();
    return json{{"method", method},
                {"error", msg && *msg ? msg : "unknown failure"}};
  }

  int h_star = 0, saturated = 0;
  check(hl_optimal_horizon(s.c_d, s.d_total, r.d_star_int, &h_star, &saturated));
  if (saturated)
    std::cerr << "warning: optimal dimension " << r.d_star_int
              << " saturates the d_total=" << s.d_total << " mapping\n";

  json o;
  o["method"] = method;
  o["d_star"] = r.d_star;
  o["d_star_int"] = r.d_star_int;
  o["h_star"] = h_star;
  o["regime"] = r.regime_used == HL_REGIME_DENSE ? "dense" : "scarce";
  o["lambert_value"] = r.lambert_value;   // NaN serializes as null
  o["lambert_approx"] = r.lambert_approx;
  o["saturated"] = saturated != 0;
  o["oracle"] = method == "numeric";
  return o;
}

const char* kHorizonCsvHeader =
    "method,d_star,d_star_int,h_star,regime,lambert_value,lambert_approx,"
    "saturated,oracle,error";

std::string horizon_row_csv(const json& o) {
  if (o.contains("error")) {
    std::string msg = o["error"].get<std::string>();
    std::replace(msg.begin(), msg.end(), ',', ';');
    return o["method"].get<std::string>() + ",,,,,,,,," + msg;
  }
  auto num = [&](const char* key) {
    return o[key].is_null() ? std::string{} : fmt(o[key].get<double>());
  };
  std::string line = o["method"].get<std::string>() + ",";
  line += fmt(o["d_star"].get<double>()) + ",";
  line += std::to_string(o["d_star_int"].get<int>()) + ",";
  line += std::to_string(o["h_star"].get<int>()) + ",";
  line += o["regime"].get<std::string>() + ",";
  line += num("lambert_value") + "," + num("lambert_approx") + ",";
  line += std::string(o["saturated"].get<bool>() ? "true" : "false") + ",";
  line += std::string(o["oracle"].get<bool>() ? "true" : "false") + ",";
  return line;
}

int run_solver(SolverArgs& a) {
  load_config(a.common);
  const json sec = section(a.common, "solver");
  const hl_loss_params p = make_loss(a.common, a.loss);

  SolverSettings s;
  s.n_regions = a.n_regions.value_or(sec.value("n_regions", 1.0));
  s.d_samples = a.d_samples.value_or(sec.value("d_samples", 1.0));
  s.d_min = a.d_min.value_or(sec.value("d_min", 1));
  s.d_max = a.d_max.value_or(sec.value("d_max", 4096));
  s.numeric_regime = a.numeric_regime.value_or(sec.value("regime", "dense"));
  s.scarce_form =
      a.scarce_form.value_or(sec.value("scarce_form", "quadratic_root")) ==
              "simple"
          ? 1
          : 0;
  s.drop_tail = a.drop_tail ? *a.drop_tail : sec.value("drop_tail_term", false);
  std::tie(s.c_d, s.d_total) = make_mapping(a.common, a.mapping, 4096);

  const std::string method = a.method.value_or(sec.value("method", "all"));
  const bool csv = effective_format(a.common) == "csv";

  if (method != "all") {
    const json o = solve_one(method, p, s, false);
    emit(a.common,
         csv ? std::string(kHorizonCsvHeader) + "\n" + horizon_row_csv(o)
             : o.dump(2));
    return 0;
  }

  // Side-by-side table; the numeric row is the simulation-free oracle. A
  // method that does not apply to these parameters reports its error inline.
  SolverSettings numeric_s = s;
  numeric_s.numeric_regime =
      (p.k2 > 0.0 && s.n_regions >= 2.0) ? "dense" : "scarce";
  json rows = json::array();
  for (const char* m : {"small_model", "large_model", "scarce"})
    rows.push_back(solve_one(m, p, s, true));
  rows.push_back(solve_one("numeric", p, numeric_s, true));
  if (csv) {
    std::string text = kHorizonCsvHeader;
    for (const auto& o : rows) text += "\n" + horizon_row_csv(o);
    emit(a.common, text);
  } else {
    emit(a.common, json{{"methods", rows}}.dump(2));
  }
  return 0;
}

/* ------------------------------------------------------------------ */
/* spectrum                                                             */

struct SpectrumArgs {
  Common common;
  std::string path;
  std::optional<int> window_len, stride, fit_min, fit_max;
  std::optional<bool> flattened;
  std::optional<std::string> header, gaps;
  std::optional<double> energy;
  std::optional<std::string> eigenvalues_out;
};

hl_header_mode parse_header(const std::string& s) {
  if (s == "yes") return HL_HEADER_YES;
  if (s == "no") return HL_HEADER_NO;
  return HL_HEADER_DETECT;
}

hl_gap_policy parse_gaps(const std::string& s) {
  if (s == "drop_row") return HL_GAP_DROP_ROW;
  if (s == "interpolate") return HL_GAP_INTERPOLATE;
  return HL_GAP_REJECT;
}

int run_spectrum(SpectrumArgs& a) {
  load_config(a.common);
  const json sec = section(a.common, "estimate");
  const int window_len = a.window_len.value_or(sec.value("window_len", 16));
  const int stride = a.stride.value_or(sec.value("stride", 1));
  const bool channel_independent =
      a.flattened ? !*a.flattened : sec.value("channel_independent", true);
  const int fit_min = a.fit_min.value_or(sec.value("fit_min", 2));
  const int fit_max = a.fit_max.value_or(sec.value("fit_max", 0));
  const auto header = parse_header(a.header.value_or(sec.value("header", "detect")));
  const auto gaps = parse_gaps(a.gaps.value_or(sec.value("gaps", "reject")));
  const double energy = a.energy.value_or(sec.value("energy", 0.95));

  hl_spectrum_result* res = nullptr;
  check(hl_estimate_spectrum_csv(a.path.c_str(), header, gaps, window_len,
                                 stride, channel_independent ? 1 : 0, fit_min,
                                 fit_max, effective_threads(a.common), &res));
  const int count = hl_spectrum_count(res);
  std::vector<double> ev(static_cast<std::size_t>(count));
  hl_status st = hl_spectrum_eigenvalues(res, ev.data(), count);
  int dim95 = 0;
  if (st == HL_OK) st = hl_spectrum_intrinsic_dim(res, energy, &dim95);

  json o;
  if (st == HL_OK) {
    o["count"] = count;
    o["lambda0_hat"] = hl_spectrum_lambda0_hat(res);
    o["alpha_z_hat"] = hl_spectrum_alpha_z_hat(res);
    o["r_squared"] = hl_spectrum_r_squared(res);
    o["slope_stderr"] = hl_spectrum_slope_stderr(res);
    o["fit_i_min"] = hl_spectrum_fit_i_min(res);
    o["fit_i_max"] = hl_spectrum_fit_i_max(res);
    o["flat_spectrum"] = hl_spectrum_flat(res) != 0;
    o["intrinsic_dim_95"] = dim95;
  }
  hl_spectrum_free(res);
  check(st);

  std::string ev_path = a.eigenvalues_out.value_or(
      sec.value("eigenvalues_out", std::string{}));
  if (ev_path.empty()) {
    const std::string base = effective_out(a.common);
    ev_path = (base.empty() ? a.path : base) + ".eigenvalues.csv";
  }
  std::string ev_text = "i,lambda\n";
  for (int i = 0; i < count; ++i)
    ev_text += std::to_string(i + 1) + "," + fmt(ev[static_cast<std::size_t>(i)]) + "\n";
  write_file(ev_path, ev_text);
  o["eigenvalues_path"] = ev_path;

  if (effective_format(a.common) == "csv") {
    std::string text = "key,value";
    for (const auto& [key, value] : o.items()) {
      text += "\n" + key + ",";
      if (value.is_string())
        text += value.get<std::string>();
      else if (value.is_boolean())
        text += value.get<bool>() ? "true" : "false";
      else if (value.is_null())
        ;
      else
        text += fmt(value.get<double>());
    }
    emit(a.common, text);
  } else {
    emit(a.common, o.dump(2));
  }
  return 0;
}

/* ------------------------------------------------------------------ */
/* fit-curve                                                            */

struct FitArgs {
  Common common;
  std::string path;
  std::optional<std::string> x_column, y_column;
  std::optional<double> alpha_min, alpha_max;
  std::optional<std::string> header, gaps;
};

int find_column(hl_table* tbl, const std::optional<std::string>& wanted,
                const char* fallback_name, int fallback_index) {
  const int cols = hl_table_cols(tbl);
  const std::string name = wanted.value_or(fallback_name);
  for (int i = 0; i < cols; ++i) {
    const char* cn = hl_table_column_name(tbl, i);
    if (cn && name == cn) return i;
  }
  if (wanted)
    throw CliError{2, "column '" + *wanted + "' not found in the input"};
  if (fallback_index >= cols)
    throw CliError{2, "need at least " + std::to_string(fallback_index + 1) +
                          " columns, got " + std::to_string(cols)};
  return fallback_index;
}

int run_fit(FitArgs& a) {
  load_config(a.common);
  const json sec = section(a.common, "fit");
  const double alpha_min = a.alpha_min.value_or(sec.value("alpha_min", 0.01));
  const double alpha_max = a.alpha_max.value_or(sec.value("alpha_max", 4.0));
  if (!a.x_column && sec.contains("x_column"))
    a.x_column = sec.value("x_column", "x");
  if (!a.y_column && sec.contains("y_column"))
    a.y_column = sec.value("y_column", "y");

  hl_table* tbl = nullptr;
  check(hl_load_table(a.path.c_str(),
                      parse_header(a.header.value_or("detect")),
                      parse_gaps(a.gaps.value_or("reject")), &tbl));
  const std::int64_t rows = hl_table_rows(tbl);
  std::vector<double> xs(static_cast<std::size_t>(rows));
  std::vector<double> ys(static_cast<std::size_t>(rows));
  hl_status st = HL_OK;
  try {
    const int xi = find_column(tbl, a.x_column, "x", 0);
    const int yi = find_column(tbl, a.y_column, "y", 1);
    st = hl_table_column(tbl, xi, xs.data(), rows);
    if (st == HL_OK) st = hl_table_column(tbl, yi, ys.data(), rows);
  } catch (...) {
    hl_table_free(tbl);
    throw;
  }
  hl_table_free(tbl);
  check(st);

  hl_curve_report* rep = nullptr;
  check(hl_fit_curves(xs.data(), ys.data(), rows, alpha_min, alpha_max, &rep));

  if (effective_format(a.common) == "csv") {
    std::string text = "model,rss,aic,bic,skipped,alpha_unidentifiable,p1,p2,p3";
    const int n = hl_curve_count(rep);
    for (int i = 0; i < n; ++i) {
      double params[3] = {std::nan(""), std::nan(""), std::nan("")};
      const int k = hl_curve_param_count(rep, i);
      if (k > 0) hl_curve_params(rep, i, params, k);
      text += "\n";
      text += hl_curve_model_name(rep, i);
      text += "," + fmt_opt(hl_curve_rss(rep, i));
      text += "," + fmt_opt(hl_curve_aic(rep, i));
      text += "," + fmt_opt(hl_curve_bic(rep, i));
      text += hl_curve_skipped(rep, i) ? ",true" : ",false";
      text += hl_curve_alpha_unidentifiable(rep, i) ? ",true" : ",false";
      for (double v : params) text += "," + fmt_opt(v);
    }
    hl_curve_free(rep);
    emit(a.common, text);
    return 0;
  }

  char* doc = nullptr;
  st = hl_curve_report_json(rep, &doc);
  hl_curve_free(rep);
  check(st);
  emit(a.common, take_string(doc));
  return 0;
}

/* ------------------------------------------------------------------ */
/* simulate                                                             */

struct SimulateArgs {
  Common common;
  std::string name;
  std::optional<std::string> variable;
  std::vector<double> values;
  std::optional<int> trials, queries, d, d_visible, d_eff, d_out,
      cells_per_axis;
  std::optional<std::int64_t> samples;
  std::optional<double> d_samples, n_regions, horizon, noise_var;
  std::optional<std::string> distribution;
};

json experiment_defaults(const std::string& long_name) {
  if (long_name == "nn_risk") {
    return json{{"experiment", "nn_risk"},
                {"variable", "D"},
                {"values", {128, 256, 512, 1024, 2048, 4096, 8192}},
                {"d_visible", 2},
                {"queries", 128},
                {"trials", 16}};
  }
  if (long_name == "quantizer_distortion") {
    return json{{"experiment", "quantizer_distortion"},
                {"d", 2},
                {"values", {2, 4, 8, 16}},
                {"samples", 100000},
                {"trials", 8}};
  }
  if (long_name == "ols_noise_term") {
    return json{{"experiment", "ols_noise_term"},
                {"d", 4},
                {"values", {64, 128, 256, 512, 1024}},
                {"noise_var", 1.0},
                {"queries", 256},
                {"trials", 64}};
  }
  // pwl_learner and downsample share a reference configuration.
  json base{{"experiment", long_name},
            {"variable", long_name == "downsample" ? "d_eff" : "N"},
            {"values", long_name == "downsample"
                           ? json{1, 2, 3, 4, 5, 6, 7, 8}
                           : json{1, 2, 4, 8, 16, 32}},
            {"spectrum", {{"lambda0", 1.0}, {"alpha_z", 1.5}, {"d_total", 8}}},
            {"noise", {{"eta", 0.1}, {"sigma_m_sq", 0.05}}},
            {"d_visible", 8},
            {"d_samples", 4096},
            {"cells_per_axis", 2},
            {"queries", 512},
            {"trials", 8}};
  return base;
}

int run_simulate(SimulateArgs& a) {
  static const std::vector<std::pair<std::string, std::string>> kNames = {
      {"nn", "nn_risk"},
      {"quantizer", "quantizer_distortion"},
      {"pwl", "pwl_learner"},
      {"downsample", "downsample"},
      {"ols", "ols_noise_term"}};
  std::string long_name;
  for (const auto& [shortn, longn] : kNames)
    if (a.name == shortn || a.name == longn) long_name = longn;
  if (long_name.empty())
    throw CliError{2, "unknown experiment '" + a.name +
                          "'; valid: nn, quantizer, pwl, downsample, ols"};

  load_config(a.common);
  json cfg = experiment_defaults(long_name);
  cfg.update(section(a.common, "experiment"), true);
  cfg["experiment"] = long_name;  // the positional always wins

  if (a.variable) cfg["variable"] = *a.variable;
  if (!a.values.empty()) cfg["values"] = a.values;
  if (a.trials) cfg["trials"] = *a.trials;
  if (a.queries) cfg["queries"] = *a.queries;
  if (a.d) cfg["d"] = *a.d;
  if (a.d_visible) cfg["d_visible"] = *a.d_visible;
  if (a.d_eff) cfg["d_eff"] = *a.d_eff;
  if (a.d_out) cfg["d_out"] = *a.d_out;
  if (a.cells_per_axis) cfg["cells_per_axis"] = *a.cells_per_axis;
  if (a.samples) cfg["samples"] = *a.samples;
  if (a.d_samples) cfg["d_samples"] = *a.d_samples;
  if (a.n_regions) cfg["n_regions"] = *a.n_regions;
  if (a.horizon) cfg["horizon"] = *a.horizon;
  if (a.noise_var) cfg["noise_var"] = *a.noise_var;
  if (a.distribution) cfg["nn_distribution"] = *a.distribution;

  const std::uint64_t seed = a.common.seed
                                 ? *a.common.seed
                                 : cfg.value("seed", effective_seed(a.common));
  cfg["seed"] = seed;
  if (a.common.threads || !cfg.contains("threads"))
    cfg["threads"] = effective_threads(a.common);
  std::fprintf(stderr, "seed: %" PRIu64 "\n", seed);

  hl_experiment_report* rep = nullptr;
  check(hl_run_experiment_json(cfg.dump().c_str(), &rep));

  char* jtext = nullptr;
  char* ctext = nullptr;
  hl_status st = hl_report_json(rep, &jtext);
  if (st == HL_OK) st = hl_report_csv(rep, &ctext);
  const double fitted = hl_report_fitted_exponent(rep);
  const double theory = hl_report_theory_exponent(rep);
  const double argmin = hl_report_argmin_x(rep);
  const int points = hl_report_point_count(rep);
  hl_report_free(rep);
  const std::string jdoc = take_string(jtext);
  const std::string cdoc = take_string(ctext);
  check(st);

  std::string base = effective_out(a.common);
  if (base.empty()) base = long_name + "_report";
  write_file(base + ".json", jdoc + "\n");
  write_file(base + ".csv", cdoc);

  std::cout << "experiment: " << long_name << "\n";
  std::cout << "points: " << points << "\n";
  if (!std::isnan(fitted))
    std::cout << "fitted exponent: " << fmt(fitted)
              << (std::isnan(theory) ? "" : " (theory " + fmt(theory) + ")")
              << "\n";
  if (!std::isnan(argmin)) std::cout << "argmin x: " << fmt(argmin) << "\n";
  std::cout << "wrote " << base << ".json " << base << ".csv\n";
  return 0;
}

/* ------------------------------------------------------------------ */
/* generate                                                             */

struct GenerateArgs {
  Common common;
  std::optional<std::int64_t> count;
  std::optional<int> d_out, d_visible, d_total, s_frames, d_i_s;
  std::optional<double> k1, k2, horizon, c_d, lambda0, alpha_z, eta,
      sigma_m_sq;
  std::optional<std::uint64_t> target_seed;
};

int run_generate(GenerateArgs& a) {
  load_config(a.common);
  const json sec = section(a.common, "generate");
  const json spec_sec = section(a.common, "spectrum");
  const json noise_sec = section(a.common, "noise");

  hl_spectrum_config spectrum;
  spectrum.lambda0 = a.lambda0.value_or(spec_sec.value("lambda0", 1.0));
  spectrum.alpha_z = a.alpha_z.value_or(spec_sec.value("alpha_z", 1.5));
  spectrum.d_total = a.d_total.value_or(spec_sec.value("d_total", 16));
  spectrum.seed = effective_seed(a.common);

  hl_noise_config noise;
  noise.eta = a.eta.value_or(noise_sec.value("eta", 0.0));
  noise.sigma_m_sq = a.sigma_m_sq.value_or(noise_sec.value("sigma_m_sq", 0.0));
  noise.s_frames = a.s_frames.value_or(noise_sec.value("s_frames", 1));
  noise.d_i_s = a.d_i_s.value_or(noise_sec.value("d_i_s", 1));

  const std::int64_t count = a.count.value_or(sec.value("count", 100));
  const int d_out = a.d_out.value_or(sec.value("d_out", 1));
  const double k1 = a.k1.value_or(sec.value("k1", 1.0));
  const double k2 = a.k2.value_or(sec.value("k2", 0.0));
  const double c_d = a.c_d.value_or(sec.value("c_d", 1.0));
  const int d_visible = a.d_visible.value_or(sec.value("d_visible", 0));
  double horizon = a.horizon.value_or(sec.value("horizon", 0.0));
  if (d_visible == 0 && horizon == 0.0) horizon = spectrum.d_total;
  const std::uint64_t target_seed =
      a.target_seed.value_or(sec.value("target_seed", spectrum.seed));

  std::fprintf(stderr, "seed: %" PRIu64 "\n", spectrum.seed);

  hl_dataset* ds = nullptr;
  check(hl_generate_dataset(&spectrum, &noise, k1, k2, d_out, target_seed, c_d,
                            count, static_cast<int>(horizon), d_visible, &ds));
  std::string path = effective_out(a.common);
  if (path.empty()) path = "dataset.csv";
  const hl_status st = hl_dataset_write_csv(ds, path.c_str());
  const std::int64_t rows = hl_dataset_rows(ds);
  const int dv = hl_dataset_d_visible(ds);
  const int dy = hl_dataset_d_out(ds);
  hl_dataset_free(ds);
  check(st);

  std::cout << "wrote " << path << ": " << rows << " rows, " << dv + dy
            << " columns (" << dv << " inputs + " << dy << " targets)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scaling-law laboratory for time-series forecasting"};
  app.require_subcommand(1);

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand(
      "predict-loss", "closed-form loss at a working dimension");
  add_common(predict_cmd, predict.common);
  add_loss_flags(predict_cmd, predict.loss);
  add_mapping_flags(predict_cmd, predict.mapping);
  predict_cmd->add_option("--d", predict.d, "working dimension");
  predict_cmd->add_option("--n-regions", predict.n_regions,
                          "partition regions N");
  predict_cmd->add_option("--d-samples", predict.d_samples, "sample count D");
  predict_cmd->add_option("--horizon", predict.horizon, "forecast horizon H");
  predict_cmd->add_option("--regime", predict.regime, "auto, dense or scarce")
      ->check(CLI::IsMember({"auto", "dense", "scarce"}));
  predict_cmd->add_option("--threshold", predict.threshold,
                          "dense/scarce decision threshold on xi");
  predict_cmd->add_flag("--drop-tail-term", predict.drop_tail,
                        "drop the truncated-tail term inside the dense bound");
  predict_cmd->add_option("--sweep", predict.sweep,
                          "VAR=LO..HI over d, H, N or D; emits CSV rows");

  SolverArgs solver;
  auto* solver_cmd = app.add_subcommand(
      "optimal-horizon", "loss-minimizing dimension and horizon");
  add_common(solver_cmd, solver.common);
  add_loss_flags(solver_cmd, solver.loss);
  add_mapping_flags(solver_cmd, solver.mapping);
  solver_cmd
      ->add_option("--method", solver.method,
                   "small_model, large_model, scarce, numeric or all")
      ->check(CLI::IsMember(
          {"small_model", "large_model", "scarce", "numeric", "all"}));
  solver_cmd->add_option("--n-regions", solver.n_regions, "partition regions N");
  solver_cmd->add_option("--d-samples", solver.d_samples, "sample count D");
  solver_cmd->add_option("--d-min", solver.d_min, "numeric search lower bound");
  solver_cmd->add_option("--d-max", solver.d_max, "numeric search upper bound");
  solver_cmd
      ->add_option("--regime", solver.numeric_regime,
                   "regime for the numeric search")
      ->check(CLI::IsMember({"dense", "scarce"}));
  solver_cmd
      ->add_option("--scarce-form", solver.scarce_form,
                   "quadratic_root or simple prefactor")
      ->check(CLI::IsMember({"quadratic_root", "simple"}));
  solver_cmd->add_flag("--drop-tail-term", solver.drop_tail,
                       "drop the truncated-tail term inside the dense bound");

  SpectrumArgs spectrum;
  auto* spectrum_cmd = app.add_subcommand(
      "spectrum", "PCA eigenvalue spectrum and decay fit of a CSV series");
  add_common(spectrum_cmd, spectrum.common);
  spectrum_cmd->add_option("input", spectrum.path, "CSV time series")
      ->required();
  spectrum_cmd->add_option("--window-len", spectrum.window_len,
                           "window length L");
  spectrum_cmd->add_option("--stride", spectrum.stride, "window stride");
  spectrum_cmd->add_flag("--flattened", spectrum.flattened,
                         "stack channels into one window row");
  spectrum_cmd->add_option("--fit-min", spectrum.fit_min,
                           "first eigenvalue index in the fit");
  spectrum_cmd->add_option("--fit-max", spectrum.fit_max,
                           "last eigenvalue index; 0 stops at the noise floor");
  spectrum_cmd->add_option("--header", spectrum.header, "detect, yes or no")
      ->check(CLI::IsMember({"detect", "yes", "no"}));
  spectrum_cmd
      ->add_option("--gaps", spectrum.gaps, "reject, drop_row or interpolate")
      ->check(CLI::IsMember({"reject", "drop_row", "interpolate"}));
  spectrum_cmd->add_option("--energy", spectrum.energy,
                           "energy fraction for the intrinsic dimension");
  spectrum_cmd->add_option("--eigenvalues-out", spectrum.eigenvalues_out,
                           "eigenvalue CSV path");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand(
      "fit-curve", "fit scaling-curve models to x,y data and rank by AIC");
  add_common(fit_cmd, fit.common);
  fit_cmd->add_option("input", fit.path, "CSV with x and y columns")
      ->required();
  fit_cmd->add_option("--x-column", fit.x_column, "x column name");
  fit_cmd->add_option("--y-column", fit.y_column, "y column name");
  fit_cmd->add_option("--alpha-min", fit.alpha_min, "exponent lower bound");
  fit_cmd->add_option("--alpha-max", fit.alpha_max, "exponent upper bound");
  fit_cmd->add_option("--header", fit.header, "detect, yes or no")
      ->check(CLI::IsMember({"detect", "yes", "no"}));
  fit_cmd->add_option("--gaps", fit.gaps, "reject, drop_row or interpolate")
      ->check(CLI::IsMember({"reject", "drop_row", "interpolate"}));

  SimulateArgs simulate;
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "Monte Carlo oracle for a predicted scaling law");
  add_common(simulate_cmd, simulate.common);
  simulate_cmd
      ->add_option("experiment", simulate.name,
                   "nn, quantizer, pwl, downsample or ols")
      ->required();
  simulate_cmd->add_option("--variable", simulate.variable,
                           "swept variable: D, N, d, d_eff or H");
  simulate_cmd->add_option("--values", simulate.values, "sweep values")
      ->delimiter(',');
  simulate_cmd->add_option("--trials", simulate.trials, "trials per point");
  simulate_cmd->add_option("--queries", simulate.queries, "test queries");
  simulate_cmd->add_option("--d", simulate.d, "ambient dimension");
  simulate_cmd->add_option("--d-visible", simulate.d_visible,
                           "visible dimension");
  simulate_cmd->add_option("--d-eff", simulate.d_eff,
                           "dimensions kept by the learner");
  simulate_cmd->add_option("--d-out", simulate.d_out, "target dimension");
  simulate_cmd->add_option("--cells-per-axis", simulate.cells_per_axis,
                           "partition cells per axis");
  simulate_cmd->add_option("--samples", simulate.samples,
                           "samples per quantizer trial");
  simulate_cmd->add_option("--d-samples", simulate.d_samples,
                           "training samples D");
  simulate_cmd->add_option("--n-regions", simulate.n_regions,
                           "partition regions N");
  simulate_cmd->add_option("--horizon", simulate.horizon, "forecast horizon");
  simulate_cmd->add_option("--noise-var", simulate.noise_var,
                           "observation noise variance");
  simulate_cmd
      ->add_option("--distribution", simulate.distribution,
                   "query distribution for nn")
      ->check(CLI::IsMember({"latent", "uniform_cube"}));

  GenerateArgs generate;
  auto* generate_cmd = app.add_subcommand(
      "generate", "synthetic forecasting dataset under a Lipschitz target");
  add_common(generate_cmd, generate.common);
  generate_cmd->add_option("--count", generate.count, "rows to generate");
  generate_cmd->add_option("--d-out", generate.d_out, "target dimension");
  generate_cmd->add_option("--d-visible", generate.d_visible,
                           "visible dimension override");
  generate_cmd->add_option("--d-total", generate.d_total, "latent dimension");
  generate_cmd->add_option("--k1", generate.k1, "Lipschitz bound");
  generate_cmd->add_option("--k2", generate.k2, "curvature bound");
  generate_cmd->add_option("--horizon", generate.horizon, "forecast horizon");
  generate_cmd->add_option("--c-d", generate.c_d,
                           "visible dimensions per horizon step");
  generate_cmd->add_option("--lambda0", generate.lambda0, "leading eigenvalue");
  generate_cmd->add_option("--alpha-z", generate.alpha_z,
                           "spectrum decay exponent");
  generate_cmd->add_option("--eta", generate.eta, "corrupted-row fraction");
  generate_cmd->add_option("--sigma-m-sq", generate.sigma_m_sq,
                           "per-frame noise variance");
  generate_cmd->add_option("--s-frames", generate.s_frames, "noise frames");
  generate_cmd->add_option("--d-i-s", generate.d_i_s,
                           "noise dimensions per frame");
  generate_cmd->add_option("--target-seed", generate.target_seed,
                           "seed of the random target function");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(predict_cmd)) return run_predict(predict);
    if (app.got_subcommand(solver_cmd)) return run_solver(solver);
    if (app.got_subcommand(spectrum_cmd)) return run_spectrum(spectrum);
    if (app.got_subcommand(fit_cmd)) return run_fit(fit);
    if (app.got_subcommand(simulate_cmd)) return run_simulate(simulate);
    if (app.got_subcommand(generate_cmd)) return run_generate(generate);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
