#include "horizonlaw.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <json.hpp>
#include <span>
#include <string>

#include "horizonlaw/csv.hpp"
#include "horizonlaw/curve_fit.hpp"
#include "horizonlaw/estimator.hpp"
#include "horizonlaw/horizon_solver.hpp"
#include "horizonlaw/intrinsic_model.hpp"
#include "horizonlaw/loss_model.hpp"
#include "horizonlaw/mc_oracle.hpp"
#include "json_schema.hpp"

namespace hl = horizonlaw;
using nlohmann::json;

struct hl_dataset {
  hl::SyntheticDataset ds;
};
struct hl_table {
  hl::Table tbl;
};
struct hl_spectrum_result {
  hl::SpectrumEstimate est;
};
struct hl_curve_report {
  std::vector<hl::ScalingFit> fits;
};
struct hl_experiment_report {
  hl::ExperimentReport rep;
};

namespace {

thread_local std::string g_error;

template <typename F>
hl_status guard(F&& fn) {
  try {
    fn();
    g_error.clear();
    return HL_OK;
  } catch (const hl::parse_error& e) {
    g_error = e.what();
    return HL_ERR_PARSE;
  } catch (const hl::io_error& e) {
    g_error = e.what();
    return HL_ERR_IO;
  } catch (const hl::construction_error& e) {
    g_error = e.what();
    return HL_ERR_CONSTRUCTION;
  } catch (const json::exception& e) {
    g_error = e.what();
    return HL_ERR_PARSE;
  } catch (const std::invalid_argument& e) {
    g_error = e.what();
    return HL_ERR_ARGUMENT;
  } catch (const std::domain_error& e) {
    g_error = e.what();
    return HL_ERR_DOMAIN;
  } catch (const std::out_of_range& e) {
    g_error = e.what();
    return HL_ERR_RANGE;
  } catch (const std::exception& e) {
    g_error = e.what();
    return HL_ERR_INTERNAL;
  } catch (...) {
    g_error = "unknown failure";
    return HL_ERR_INTERNAL;
  }
}

hl_status fail_argument(const char* msg) {
  g_error = msg;
  return HL_ERR_ARGUMENT;
}

hl::CsvOptions to_csv_options(hl_header_mode header, hl_gap_policy gaps) {
  hl::CsvOptions copt;
  copt.header = header == HL_HEADER_YES  ? hl::CsvOptions::Header::yes
                : header == HL_HEADER_NO ? hl::CsvOptions::Header::no
                                         : hl::CsvOptions::Header::detect;
  copt.gaps = gaps == HL_GAP_DROP_ROW      ? hl::GapPolicy::drop_row
              : gaps == HL_GAP_INTERPOLATE ? hl::GapPolicy::interpolate
                                           : hl::GapPolicy::reject;
  return copt;
}

void require(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hl::LossParams to_params(const hl_loss_params* p) {
  require(p, "params");
  hl::LossParams out;
  out.k1 = p->k1;
  out.k2 = p->k2;
  out.eta = p->eta;
  out.lambda0 = p->lambda0;
  out.alpha_z = p->alpha_z;
  out.noise_total = p->noise_total;
  return out;
}

hl::SpectrumConfig to_spectrum(const hl_spectrum_config* cfg) {
  require(cfg, "spectrum config");
  hl::SpectrumConfig out;
  out.lambda0 = cfg->lambda0;
  out.alpha_z = cfg->alpha_z;
  out.d_total = cfg->d_total;
  out.seed = cfg->seed;
  return out;
}

hl::NoiseConfig to_noise(const hl_noise_config* cfg) {
  require(cfg, "noise config");
  hl::NoiseConfig out;
  out.eta = cfg->eta;
  out.sigma_m_sq = cfg->sigma_m_sq;
  out.s_frames = cfg->s_frames;
  out.d_i_s = cfg->d_i_s;
  return out;
}

void fill_result(const hl::OptimalResult& r, hl_optimal_result* out) {
  out->d_star = r.d_star;
  out->d_star_int = r.d_star_int;
  out->h_star = r.h_star;
  out->regime_used =
      r.regime_used == hl::Regime::dense ? HL_REGIME_DENSE : HL_REGIME_SCARCE;
  switch (r.method) {
    case hl::SolverMethod::small_model: out->method = HL_SOLVER_SMALL_MODEL; break;
    case hl::SolverMethod::large_model: out->method = HL_SOLVER_LARGE_MODEL; break;
    case hl::SolverMethod::scarce: out->method = HL_SOLVER_SCARCE; break;
    default: out->method = HL_SOLVER_NUMERIC; break;
  }
  out->lambert_value = r.lambert_value;
  out->lambert_approx = r.lambert_approx;
  out->saturated = r.saturated ? 1 : 0;
}

hl::RegimeMode to_mode(hl_regime_mode mode) {
  switch (mode) {
    case HL_MODE_DENSE: return hl::RegimeMode::dense;
    case HL_MODE_SCARCE: return hl::RegimeMode::scarce;
    case HL_MODE_AUTOMATIC: return hl::RegimeMode::automatic;
  }
  throw std::invalid_argument("unknown regime mode");
}

// ---- experiment config parsing -------------------------------------------

hl::SweepVariable parse_variable(const std::string& name) {
  if (name == "D") return hl::SweepVariable::d_samples;
  if (name == "N") return hl::SweepVariable::n_regions;
  if (name == "d") return hl::SweepVariable::d_visible;
  if (name == "d_eff") return hl::SweepVariable::d_eff;
  if (name == "H") return hl::SweepVariable::horizon;
  throw std::invalid_argument("unknown sweep variable '" + name +
                              "'; expected D, N, d, d_eff, or H");
}

hl::SweepSpec parse_sweep(const json& j) {
  hl::SweepSpec spec;
  if (j.contains("variable")) spec.variable = parse_variable(j.at("variable"));
  if (!j.contains("values") || !j.at("values").is_array())
    throw std::invalid_argument("experiment config needs a 'values' array");
  spec.values = j.at("values").get<std::vector<double>>();

  if (j.contains("spectrum")) {
    const json& s = j.at("spectrum");
    spec.spectrum.lambda0 = s.value("lambda0", spec.spectrum.lambda0);
    spec.spectrum.alpha_z = s.value("alpha_z", spec.spectrum.alpha_z);
    spec.spectrum.d_total = s.value("d_total", spec.spectrum.d_total);
    spec.spectrum.seed = s.value("seed", spec.spectrum.seed);
  }
  if (j.contains("noise")) {
    const json& s = j.at("noise");
    spec.noise.eta = s.value("eta", spec.noise.eta);
    spec.noise.sigma_m_sq = s.value("sigma_m_sq", spec.noise.sigma_m_sq);
    spec.noise.s_frames = s.value("s_frames", spec.noise.s_frames);
    spec.noise.d_i_s = s.value("d_i_s", spec.noise.d_i_s);
  }
  if (j.contains("loss")) {
    const json& s = j.at("loss");
    spec.loss.k1 = s.value("k1", spec.loss.k1);
    spec.loss.k2 = s.value("k2", spec.loss.k2);
  }
  spec.d_samples = j.value("d_samples", spec.d_samples);
  spec.n_regions = j.value("n_regions", spec.n_regions);
  spec.d_visible = j.value("d_visible", spec.d_visible);
  spec.d_eff = j.value("d_eff", spec.d_eff);
  spec.horizon = j.value("horizon", spec.horizon);
  spec.d_out = j.value("d_out", spec.d_out);
  spec.cells_per_axis = j.value("cells_per_axis", spec.cells_per_axis);
  spec.queries = j.value("queries", spec.queries);
  spec.trials = j.value("trials", spec.trials);
  spec.seed = j.value("seed", spec.seed);
  spec.threads = j.value("threads", spec.threads);
  if (j.contains("nn_distribution")) {
    const std::string name = j.at("nn_distribution");
    if (name == "latent")
      spec.nn_distribution = hl::NnDistribution::latent;
    else if (name == "uniform_cube")
      spec.nn_distribution = hl::NnDistribution::uniform_cube;
    else
      throw std::invalid_argument("unknown nn_distribution '" + name + "'");
  }
  return spec;
}

hl::ExperimentReport dispatch_experiment(const json& j) {
  if (!j.is_object())
    throw std::invalid_argument("experiment config must be a JSON object");
  const std::string name = j.value("experiment", "");
  if (name == "nn_risk") {
    hl::SweepSpec spec = parse_sweep(j);
    if (!j.contains("variable")) spec.variable = hl::SweepVariable::d_samples;
    return hl::nn_risk_experiment(spec);
  }
  if (name == "quantizer_distortion") {
    if (!j.contains("values") || !j.at("values").is_array())
      throw std::invalid_argument("experiment config needs a 'values' array");
    std::vector<std::int64_t> cells;
    for (const auto& v : j.at("values")) cells.push_back(v.get<std::int64_t>());
    return hl::quantizer_distortion_experiment(
        j.value("d", 1), cells, j.value("samples", std::int64_t{100000}),
        j.value("trials", 8), j.value("seed", std::uint64_t{0}),
        j.value("threads", 1));
  }
  if (name == "pwl_learner") {
    hl::SweepSpec spec = parse_sweep(j);
    if (!j.contains("variable")) spec.variable = hl::SweepVariable::n_regions;
    return hl::pwl_learner_experiment(spec);
  }
  if (name == "downsample") {
    hl::SweepSpec spec = parse_sweep(j);
    if (!j.contains("variable")) spec.variable = hl::SweepVariable::d_eff;
    return hl::downsample_experiment(spec);
  }
  if (name == "ols_noise_term") {
    if (!j.contains("values") || !j.at("values").is_array())
      throw std::invalid_argument("experiment config needs a 'values' array");
    std::vector<std::int64_t> counts;
    for (const auto& v : j.at("values")) counts.push_back(v.get<std::int64_t>());
    return hl::ols_noise_term_experiment(
        j.value("d", 1), counts, j.value("noise_var", 1.0), j.value("trials", 8),
        j.value("seed", std::uint64_t{0}), j.value("threads", 1),
        j.value("queries", 256));
  }
  throw std::invalid_argument(
      "unknown experiment '" + name +
      "'; known: nn_risk, quantizer_distortion, pwl_learner, downsample, "
      "ols_noise_term");
}

}  // namespace

extern "C" {

const char* hl_last_error(void) { return g_error.c_str(); }

const char* hl_version(void) { return "1.0.0"; }

void hl_string_free(char* s) { std::free(s); }

hl_status hl_bayesian_loss(const hl_loss_params* p, double d, double* out) {
  if (!out) return fail_argument("out must not be null");
  return guard([&] { *out = hl::bayesian_loss(to_params(p), d); });
}

hl_status hl_approx_loss_dense(const hl_loss_params* p, double d, double n_regions,
                               double d_samples, int drop_tail_term, double* out) {
  if (!out) return fail_argument("out must not be null");
  return guard([&] {
    *out = hl::approx_loss_dense(to_params(p), d, n_regions, d_samples,
                                 drop_tail_term != 0);
  });
}

hl_status hl_approx_loss_scarce(const hl_loss_params* p, double d,
                                double d_samples, double* out) {
  if (!out) return fail_argument("out must not be null");
  return guard([&] { *out = hl::approx_loss_scarce(to_params(p), d, d_samples); });
}

hl_status hl_approx_loss_optimal_partition(const hl_loss_params* p, double d,
                                           double n_regions, double* out) {
  if (!out) return fail_argument("out must not be null");
  return guard(
      [&] { *out = hl::approx_loss_optimal_partition(to_params(p), d, n_regions); });
}

hl_status hl_classify_regime(double d_samples, double n_regions, double horizon,
                             double threshold, hl_regime* regime_out,
                             double* xi_out) {
  if (!regime_out) return fail_argument("regime_out must not be null");
  return guard([&] {
    const hl::RegimeDecision dec =
        hl::classify_regime(d_samples, n_regions, horizon, threshold);
    *regime_out =
        dec.regime == hl::Regime::dense ? HL_REGIME_DENSE : HL_REGIME_SCARCE;
    if (xi_out) *xi_out = dec.xi;
  });
}

hl_status hl_total_loss(const hl_loss_params* p, double d, double n_regions,
                        double d_samples, hl_regime_mode mode, double horizon,
                        double threshold, int drop_tail_term, double* out) {
  if (!out) return fail_argument("out must not be null");
  return guard([&] {
    *out = hl::total_loss(to_params(p), d, n_regions, d_samples, to_mode(mode),
                          horizon, threshold, drop_tail_term != 0);
  });
}

hl_status hl_lambert_w(double x, double* out) {
  if (!out) return fail_argument("out must not be null");
  return guard([&] { *out = hl::lambert_w(x); });
}

hl_status hl_optimal_d_small_model(const hl_loss_params* p, double n_regions,
                                   hl_optimal_result* out) {
  if (!out) return fail_argument("out must not be null");
  return guard(
      [&] { fill_result(hl::optimal_d_small_model(to_params(p), n_regions), out); });
}

hl_status hl_optimal_d_large_model(const hl_loss_params* p, double n_regions,
                                   double d_samples, hl_optimal_result* out) {
  if (!out) return fail_argument("out must not be null");
  return guard([&] {
    fill_result(hl::optimal_d_large_model(to_params(p), n_regions, d_samples), out);
  });
}

hl_status hl_optimal_d_scarce(const hl_loss_params* p, double d_samples, int form,
                              hl_optimal_result* out) {
  if (!out) return fail_argument("out must not be null");
  return guard([&] {
    fill_result(hl::optimal_d_scarce(to_params(p), d_samples,
                                     form == 1 ? hl::ScarceForm::simple
                                               : hl::ScarceForm::quadratic_root),
                out);
  });
}

hl_status hl_optimal_d_numeric(const hl_loss_params* p, double n_regions,
                               double d_samples, hl_regime regime, int d_min,
                               int d_max, int drop_tail_term,
                               hl_optimal_result* out) {
  if (!out) return fail_argument("out must not be null");
  return guard([&] {
    fill_result(hl::optimal_d_numeric(to_params(p), n_regions, d_samples,
                                      regime == HL_REGIME_SCARCE
                                          ? hl::Regime::scarce
                                          : hl::Regime::dense,
                                      d_min, d_max, drop_tail_term != 0),
                out);
  });
}

hl_status hl_d_of_horizon(double c_d, int d_total, int horizon, int* d_out) {
  if (!d_out) return fail_argument("d_out must not be null");
  return guard(
      [&] { *d_out = hl::d_of_horizon(hl::HorizonMapping{c_d, d_total}, horizon); });
}

hl_status hl_optimal_horizon(double c_d, int d_total, int d_star_int,
                             int* h_star_out, int* saturated_out) {
  if (!h_star_out) return fail_argument("h_star_out must not be null");
  return guard([&] {
    const hl::HorizonResult res =
        hl::optimal_horizon(hl::HorizonMapping{c_d, d_total}, d_star_int);
    *h_star_out = res.h_star;
    if (saturated_out) *saturated_out = res.saturated ? 1 : 0;
  });
}

hl_status hl_eigenvalue(const hl_spectrum_config* cfg, int i, double* out) {
  if (!out) return fail_argument("out must not be null");
  return guard([&] { *out = hl::eigenvalue(to_spectrum(cfg), i); });
}

hl_status hl_tail_variance(const hl_spectrum_config* cfg, int d, int approx,
                           double* out) {
  if (!out) return fail_argument("out must not be null");
  return guard([&] {
    *out = hl::tail_variance(to_spectrum(cfg), d,
                             approx ? hl::TailMode::approx : hl::TailMode::exact);
  });
}

hl_status hl_generate_dataset(const hl_spectrum_config* spectrum,
                              const hl_noise_config* noise, double k1, double k2,
                              int d_out, uint64_t target_seed, double c_d,
                              int64_t count, int horizon, int d_visible_override,
                              hl_dataset** out) {
  if (!out) return fail_argument("out must not be null");
  *out = nullptr;
  return guard([&] {
    const hl::SpectrumConfig cfg = to_spectrum(spectrum);
    const hl::NoiseConfig ncfg = to_noise(noise);
    if (d_visible_override != 0 &&
        (d_visible_override < 1 || d_visible_override > cfg.d_total))
      throw std::invalid_argument("d_visible outside [1, d_total]");
    const hl::TargetFunction target =
        hl::make_target(cfg, k1, k2, d_out, target_seed);
    auto handle = std::make_unique<hl_dataset>();
    if (d_visible_override != 0) {
      const hl::HorizonMapping map{static_cast<double>(d_visible_override),
                                   cfg.d_total};
      handle->ds = hl::generate_dataset(cfg, ncfg, target, map, count, 1);
    } else {
      const hl::HorizonMapping map{c_d, cfg.d_total};
      handle->ds = hl::generate_dataset(cfg, ncfg, target, map, count, horizon);
    }
    *out = handle.release();
  });
}

int64_t hl_dataset_rows(const hl_dataset* ds) {
  return ds ? static_cast<int64_t>(ds->ds.inputs.rows()) : 0;
}

int hl_dataset_d_visible(const hl_dataset* ds) {
  return ds ? ds->ds.d_visible : 0;
}

int hl_dataset_d_out(const hl_dataset* ds) {
  return ds ? static_cast<int>(ds->ds.targets.cols()) : 0;
}

static hl_status copy_matrix(const Eigen::MatrixXd& m, double* buf,
                             int64_t buf_len) {
  return guard([&] {
    require(buf, "buf");
    if (buf_len < static_cast<int64_t>(m.rows()) * m.cols())
      throw std::invalid_argument("buffer too small");
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) *buf++ = m(r, c);
  });
}

hl_status hl_dataset_inputs(const hl_dataset* ds, double* buf, int64_t buf_len) {
  if (!ds) return fail_argument("dataset must not be null");
  return copy_matrix(ds->ds.inputs, buf, buf_len);
}

hl_status hl_dataset_targets(const hl_dataset* ds, double* buf, int64_t buf_len) {
  if (!ds) return fail_argument("dataset must not be null");
  return copy_matrix(ds->ds.targets, buf, buf_len);
}

hl_status hl_dataset_write_csv(const hl_dataset* ds, const char* path) {
  if (!ds) return fail_argument("dataset must not be null");
  return guard([&] {
    require(path, "path");
    hl::write_csv(ds->ds, path);
  });
}

void hl_dataset_free(hl_dataset* ds) { delete ds; }

hl_status hl_load_table(const char* path, hl_header_mode header,
                        hl_gap_policy gaps, hl_table** out) {
  if (!out) return fail_argument("out must not be null");
  *out = nullptr;
  return guard([&] {
    require(path, "path");
    auto handle = std::make_unique<hl_table>();
    handle->tbl = hl::load_table(path, to_csv_options(header, gaps));
    *out = handle.release();
  });
}

int64_t hl_table_rows(const hl_table* tbl) {
  return tbl ? static_cast<int64_t>(tbl->tbl.values.rows()) : 0;
}

int hl_table_cols(const hl_table* tbl) {
  return tbl ? static_cast<int>(tbl->tbl.values.cols()) : 0;
}

const char* hl_table_column_name(const hl_table* tbl, int col) {
  if (!tbl || col < 0 ||
      col >= static_cast<int>(tbl->tbl.column_names.size())) {
    return nullptr;
  }
  return tbl->tbl.column_names[static_cast<std::size_t>(col)].c_str();
}

hl_status hl_table_column(const hl_table* tbl, int col, double* buf,
                          int64_t buf_len) {
  return guard([&] {
    require(tbl, "tbl");
    require(buf, "buf");
    if (col < 0 || col >= tbl->tbl.values.cols()) {
      throw std::out_of_range("column index out of range");
    }
    const auto rows = tbl->tbl.values.rows();
    if (buf_len < rows) throw std::invalid_argument("buffer too small");
    Eigen::Map<Eigen::VectorXd>(buf, rows) = tbl->tbl.values.col(col);
  });
}

void hl_table_free(hl_table* tbl) { delete tbl; }

hl_status hl_estimate_spectrum_csv(const char* path, hl_header_mode header,
                                   hl_gap_policy gaps, int window_len, int stride,
                                   int channel_independent, int zipf_i_min,
                                   int zipf_i_max, int threads,
                                   hl_spectrum_result** out) {
  if (!out) return fail_argument("out must not be null");
  *out = nullptr;
  return guard([&] {
    require(path, "path");
    const hl::Series series = hl::load_series(path, to_csv_options(header, gaps));
    hl::WindowOptions wopt;
    wopt.window_len = window_len;
    wopt.stride = stride;
    wopt.channel_independent = channel_independent != 0;
    const hl::WindowMatrix windows = hl::make_windows(series, wopt);
    const Eigen::VectorXd ev = hl::pca_spectrum(windows.rows, threads);
    hl::ZipfFitOptions zopt;
    zopt.i_min = zipf_i_min;
    zopt.i_max = zipf_i_max;
    auto handle = std::make_unique<hl_spectrum_result>();
    handle->est = hl::fit_zipf(ev, zopt);
    *out = handle.release();
  });
}

int hl_spectrum_count(const hl_spectrum_result* res) {
  return res ? static_cast<int>(res->est.eigenvalues.size()) : 0;
}

hl_status hl_spectrum_eigenvalues(const hl_spectrum_result* res, double* buf,
                                  int64_t buf_len) {
  if (!res) return fail_argument("result must not be null");
  return guard([&] {
    require(buf, "buf");
    if (buf_len < res->est.eigenvalues.size())
      throw std::invalid_argument("buffer too small");
    for (Eigen::Index i = 0; i < res->est.eigenvalues.size(); ++i)
      buf[i] = res->est.eigenvalues(i);
  });
}

double hl_spectrum_lambda0_hat(const hl_spectrum_result* res) {
  return res ? res->est.lambda0_hat : 0.0;
}
double hl_spectrum_alpha_z_hat(const hl_spectrum_result* res) {
  return res ? res->est.alpha_z_hat : 0.0;
}
double hl_spectrum_r_squared(const hl_spectrum_result* res) {
  return res ? res->est.r_squared : 0.0;
}
double hl_spectrum_slope_stderr(const hl_spectrum_result* res) {
  return res ? res->est.slope_stderr : 0.0;
}
int hl_spectrum_fit_i_min(const hl_spectrum_result* res) {
  return res ? res->est.fit_i_min : 0;
}
int hl_spectrum_fit_i_max(const hl_spectrum_result* res) {
  return res ? res->est.fit_i_max : 0;
}
int hl_spectrum_flat(const hl_spectrum_result* res) {
  return res && res->est.flat_spectrum ? 1 : 0;
}

hl_status hl_spectrum_intrinsic_dim(const hl_spectrum_result* res, double energy,
                                    int* out) {
  if (!res) return fail_argument("result must not be null");
  if (!out) return fail_argument("out must not be null");
  return guard(
      [&] { *out = hl::intrinsic_dim_estimate(res->est.eigenvalues, energy); });
}

void hl_spectrum_free(hl_spectrum_result* res) { delete res; }

hl_status hl_fit_zipf(const double* eigenvalues, int64_t count, int i_min,
                      int i_max, double floor_ratio, double flat_threshold,
                      hl_zipf_fit* out) {
  if (!out) return fail_argument("out must not be null");
  return guard([&] {
    require(eigenvalues, "eigenvalues");
    Eigen::VectorXd ev(count);
    for (int64_t i = 0; i < count; ++i) ev(static_cast<Eigen::Index>(i)) = eigenvalues[i];
    hl::ZipfFitOptions opt;
    opt.i_min = i_min;
    opt.i_max = i_max;
    if (floor_ratio > 0.0) opt.floor_ratio = floor_ratio;
    if (flat_threshold > 0.0) opt.flat_alpha_threshold = flat_threshold;
    const hl::SpectrumEstimate est = hl::fit_zipf(ev, opt);
    out->lambda0_hat = est.lambda0_hat;
    out->alpha_z_hat = est.alpha_z_hat;
    out->r_squared = est.r_squared;
    out->slope_stderr = est.slope_stderr;
    out->fit_i_min = est.fit_i_min;
    out->fit_i_max = est.fit_i_max;
    out->flat_spectrum = est.flat_spectrum ? 1 : 0;
  });
}

hl_status hl_intrinsic_dim(const double* eigenvalues, int64_t count, double energy,
                           int* out) {
  if (!out) return fail_argument("out must not be null");
  return guard([&] {
    require(eigenvalues, "eigenvalues");
    Eigen::VectorXd ev(count);
    for (int64_t i = 0; i < count; ++i) ev(static_cast<Eigen::Index>(i)) = eigenvalues[i];
    *out = hl::intrinsic_dim_estimate(ev, energy);
  });
}

hl_status hl_fit_curves(const double* xs, const double* ys, int64_t n,
                        double alpha_min, double alpha_max,
                        hl_curve_report** out) {
  if (!out) return fail_argument("out must not be null");
  *out = nullptr;
  return guard([&] {
    require(xs, "xs");
    require(ys, "ys");
    hl::FitOptions opt;
    if (alpha_min > 0.0) opt.alpha_min = alpha_min;
    if (alpha_max > 0.0) opt.alpha_max = alpha_max;
    auto handle = std::make_unique<hl_curve_report>();
    handle->fits = hl::compare_models(
        std::span<const double>(xs, static_cast<std::size_t>(n)),
        std::span<const double>(ys, static_cast<std::size_t>(n)), opt);
    *out = handle.release();
  });
}

int hl_curve_count(const hl_curve_report* rep) {
  return rep ? static_cast<int>(rep->fits.size()) : 0;
}

static const hl::ScalingFit* fit_at(const hl_curve_report* rep, int idx) {
  if (!rep || idx < 0 || idx >= static_cast<int>(rep->fits.size())) return nullptr;
  return &rep->fits[static_cast<std::size_t>(idx)];
}

const char* hl_curve_model_name(const hl_curve_report* rep, int idx) {
  const hl::ScalingFit* f = fit_at(rep, idx);
  return f ? hl::curve_model_name(f->model) : "";
}
int hl_curve_param_count(const hl_curve_report* rep, int idx) {
  const hl::ScalingFit* f = fit_at(rep, idx);
  return f ? static_cast<int>(f->params.size()) : 0;
}
hl_status hl_curve_params(const hl_curve_report* rep, int idx, double* buf,
                          int64_t buf_len) {
  const hl::ScalingFit* f = fit_at(rep, idx);
  if (!f) return fail_argument("bad report index");
  return guard([&] {
    require(buf, "buf");
    if (buf_len < static_cast<int64_t>(f->params.size()))
      throw std::invalid_argument("buffer too small");
    for (std::size_t i = 0; i < f->params.size(); ++i) buf[i] = f->params[i];
  });
}
double hl_curve_rss(const hl_curve_report* rep, int idx) {
  const hl::ScalingFit* f = fit_at(rep, idx);
  return f ? f->rss : 0.0;
}
double hl_curve_aic(const hl_curve_report* rep, int idx) {
  const hl::ScalingFit* f = fit_at(rep, idx);
  return f ? f->aic : 0.0;
}
double hl_curve_bic(const hl_curve_report* rep, int idx) {
  const hl::ScalingFit* f = fit_at(rep, idx);
  return f ? f->bic : 0.0;
}
int hl_curve_skipped(const hl_curve_report* rep, int idx) {
  const hl::ScalingFit* f = fit_at(rep, idx);
  return f && f->skipped ? 1 : 0;
}
const char* hl_curve_skip_reason(const hl_curve_report* rep, int idx) {
  const hl::ScalingFit* f = fit_at(rep, idx);
  return f ? f->skip_reason.c_str() : "";
}
int hl_curve_alpha_unidentifiable(const hl_curve_report* rep, int idx) {
  const hl::ScalingFit* f = fit_at(rep, idx);
  return f && f->alpha_unidentifiable ? 1 : 0;
}

hl_status hl_curve_report_json(const hl_curve_report* rep, char** out) {
  if (!rep) return fail_argument("report must not be null");
  if (!out) return fail_argument("out must not be null");
  *out = nullptr;
  return guard([&] {
    json arr = json::array();
    for (const auto& f : rep->fits) {
      json item;
      item["model"] = hl::curve_model_name(f.model);
      item["params"] = f.params;
      item["rss"] = f.rss;
      item["n_points"] = f.n_points;
      item["k_params"] = f.k_params;
      item["aic"] = f.aic;
      item["bic"] = f.bic;
      item["skipped"] = f.skipped;
      if (f.skipped) item["skip_reason"] = f.skip_reason;
      item["alpha_unidentifiable"] = f.alpha_unidentifiable;
      arr.push_back(std::move(item));
    }
    json doc;
    doc["models"] = std::move(arr);
    doc["best"] = rep->fits.empty() ? "" : hl::curve_model_name(rep->fits[0].model);
    *out = dup_string(doc.dump(2));
  });
}

void hl_curve_free(hl_curve_report* rep) { delete rep; }

hl_status hl_run_experiment_json(const char* config_json,
                                 hl_experiment_report** out) {
  if (!out) return fail_argument("out must not be null");
  *out = nullptr;
  return guard([&] {
    require(config_json, "config_json");
    const json j = json::parse(config_json);
    auto handle = std::make_unique<hl_experiment_report>();
    handle->rep = dispatch_experiment(j);
    *out = handle.release();
  });
}

hl_status hl_report_json(const hl_experiment_report* rep, char** out) {
  if (!rep) return fail_argument("report must not be null");
  if (!out) return fail_argument("out must not be null");
  *out = nullptr;
  return guard([&] { *out = dup_string(hl::report_to_json(rep->rep)); });
}

hl_status hl_report_csv(const hl_experiment_report* rep, char** out) {
  if (!rep) return fail_argument("report must not be null");
  if (!out) return fail_argument("out must not be null");
  *out = nullptr;
  return guard([&] { *out = dup_string(hl::report_to_csv(rep->rep)); });
}

const char* hl_report_experiment(const hl_experiment_report* rep) {
  return rep ? rep->rep.experiment.c_str() : "";
}
int hl_report_point_count(const hl_experiment_report* rep) {
  return rep ? static_cast<int>(rep->rep.points.size()) : 0;
}
double hl_report_fitted_exponent(const hl_experiment_report* rep) {
  return rep ? rep->rep.fitted_exponent : 0.0;
}
double hl_report_theory_exponent(const hl_experiment_report* rep) {
  return rep ? rep->rep.theory_exponent : 0.0;
}
double hl_report_argmin_x(const hl_experiment_report* rep) {
  return rep ? rep->rep.argmin_x : 0.0;
}

void hl_report_free(hl_experiment_report* rep) { delete rep; }

hl_status hl_validate_json(const char* schema_json, const char* doc_json,
                           char** error_out) {
  if (error_out) *error_out = nullptr;
  return guard([&] {
    require(schema_json, "schema_json");
    require(doc_json, "doc_json");
    const json schema = json::parse(schema_json);
    const json doc = json::parse(doc_json);
    if (auto err = hl::validate_schema(schema, doc)) {
      if (error_out) *error_out = dup_string(*err);
      throw hl::parse_error(*err);
    }
  });
}

}  // extern "C"
