// Exercises the shared-library C API end to end: status codes, error-state
// handling, opaque-handle lifecycles, and numeric parity with the frozen
// values the C++ unit suites pin.  This translation unit deliberately
// includes only the public C header.
#include <doctest.h>

#include <horizonlaw.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open ", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string temp_path(const char* name) {
  return std::string("capi_tmp_") + name;
}

struct FileGuard {
  std::string path;
  explicit FileGuard(std::string p) : path(std::move(p)) {}
  ~FileGuard() { std::remove(path.c_str()); }
};

hl_loss_params base_params() {
  return hl_loss_params{1.0, 0.0, 0.0, 1.0, 2.0, 0.0};
}

hl_spectrum_config base_spectrum() {
  return hl_spectrum_config{1.0, 2.0, 16, 42};
}

hl_noise_config quiet_noise() {
  return hl_noise_config{0.0, 0.0, 3, 3};
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version string and error-state basics") {
  CHECK(std::strcmp(hl_version(), "1.0.0") == 0);
  // hl_last_error is always a valid C string, empty before any failure in
  // this thread.
  CHECK(hl_last_error() != nullptr);
  hl_string_free(nullptr);  // free(NULL) must be a no-op

  double out = 0.0;
  hl_loss_params p = base_params();
  p.k1 = 0.0;  // domain violation
  CHECK(hl_bayesian_loss(&p, 10.0, &out) == HL_ERR_DOMAIN);
  CHECK(std::string(hl_last_error()) == "k1 must be positive");

  // A subsequent success clears the sticky message.
  p.k1 = 1.0;
  CHECK(hl_bayesian_loss(&p, 10.0, &out) == HL_OK);
  CHECK(std::string(hl_last_error()).empty());
}

TEST_CASE("status mapping covers every error code") {
  double out = 0.0;

  SUBCASE("argument: null out pointer") {
    hl_loss_params p = base_params();
    CHECK(hl_bayesian_loss(&p, 10.0, nullptr) == HL_ERR_ARGUMENT);
    CHECK(std::string(hl_last_error()) == "out must not be null");
  }
  SUBCASE("argument: null params struct") {
    CHECK(hl_bayesian_loss(nullptr, 10.0, &out) == HL_ERR_ARGUMENT);
    CHECK(std::string(hl_last_error()) == "params must not be null");
  }
  SUBCASE("domain: zero lambda0") {
    hl_loss_params p = base_params();
    p.lambda0 = 0.0;
    CHECK(hl_bayesian_loss(&p, 10.0, &out) == HL_ERR_DOMAIN);
  }
  SUBCASE("range: eigenvalue index past d_total") {
    hl_spectrum_config cfg = base_spectrum();
    CHECK(hl_eigenvalue(&cfg, 99, &out) == HL_ERR_RANGE);
  }
  SUBCASE("parse: malformed CSV") {
    const std::string path = temp_path("bad.csv");
    FileGuard guard(path);
    std::ofstream(path) << "a,b\n1,oops\n";
    hl_table* tbl = nullptr;
    CHECK(hl_load_table(path.c_str(), HL_HEADER_DETECT, HL_GAP_REJECT, &tbl) ==
          HL_ERR_PARSE);
    CHECK(tbl == nullptr);
    CHECK(std::string(hl_last_error()).find("cannot parse 'oops'") !=
          std::string::npos);
  }
  SUBCASE("io: missing file") {
    hl_table* tbl = nullptr;
    CHECK(hl_load_table("definitely_missing_821.csv", HL_HEADER_DETECT,
                        HL_GAP_REJECT, &tbl) == HL_ERR_IO);
    CHECK(tbl == nullptr);
  }
  SUBCASE("construction: infeasible curvature budget") {
    hl_spectrum_config cfg = base_spectrum();
    hl_noise_config noise = quiet_noise();
    hl_dataset* ds = nullptr;
    // k2 far above what random quadratics can reach for this width.
    CHECK(hl_generate_dataset(&cfg, &noise, 1.0, 1e6, 2, 7, 1.0, 16, 16, 0,
                              &ds) == HL_ERR_CONSTRUCTION);
    CHECK(ds == nullptr);
  }
}

TEST_CASE("loss functions match the frozen C++ oracle values") {
  double out = 0.0;

  hl_loss_params p = base_params();
  CHECK(hl_bayesian_loss(&p, 10.0, &out) == HL_OK);
  CHECK(out == doctest::Approx(0.1).epsilon(1e-14));

  p.eta = 0.25;
  p.noise_total = 2.0;
  CHECK(hl_bayesian_loss(&p, 10.0, &out) == HL_OK);
  CHECK(out == doctest::Approx(0.575).epsilon(1e-14));

  p = base_params();
  p.k2 = 1.0;
  CHECK(hl_approx_loss_dense(&p, 2.0, 4.0, 100.0, 0, &out) == HL_OK);
  CHECK(out == doctest::Approx(0.04633257397764611).epsilon(1e-14));
  CHECK(hl_approx_loss_dense(&p, 2.0, 4.0, 100.0, 1, &out) == HL_OK);
  CHECK(out == doctest::Approx(0.006332573977646111).epsilon(1e-14));

  p = base_params();
  CHECK(hl_approx_loss_scarce(&p, 10.0, 1e4, &out) == HL_OK);
  CHECK(out == doctest::Approx(0.12612179292644043).epsilon(1e-14));

  p = base_params();
  p.k2 = 1.0;
  p.alpha_z = 1.5;
  CHECK(hl_approx_loss_optimal_partition(&p, 4.0, 4.0, &out) == HL_OK);
  CHECK(out == doctest::Approx(0.008458455202288294).epsilon(1e-14));
}

TEST_CASE("regime classification and total loss") {
  hl_regime regime = HL_REGIME_DENSE;
  double xi = 0.0;
  // xi = D / (N H) = 1024 / (16 * 8) = 8 >= 0.5 -> dense.
  CHECK(hl_classify_regime(1024.0, 16.0, 8.0, 0.5, &regime, &xi) == HL_OK);
  CHECK(regime == HL_REGIME_DENSE);
  CHECK(xi == doctest::Approx(8.0).epsilon(1e-14));
  // xi_out is optional.
  CHECK(hl_classify_regime(1024.0, 16.0, 8.0, 0.5, &regime, nullptr) == HL_OK);
  CHECK(hl_classify_regime(1024.0, 16.0, 8.0, 0.5, nullptr, &xi) ==
        HL_ERR_ARGUMENT);

  hl_loss_params p = base_params();
  p.k2 = 1.0;
  double total = 0.0, dense = 0.0, bayes = 0.0;
  CHECK(hl_total_loss(&p, 2.0, 4.0, 100.0, HL_MODE_DENSE, 0.0, 0.5, 0,
                      &total) == HL_OK);
  CHECK(hl_approx_loss_dense(&p, 2.0, 4.0, 100.0, 0, &dense) == HL_OK);
  CHECK(hl_bayesian_loss(&p, 2.0, &bayes) == HL_OK);
  CHECK(total == doctest::Approx(bayes + dense).epsilon(1e-14));

  // Automatic mode requires a horizon to compute xi.
  CHECK(hl_total_loss(&p, 2.0, 4.0, 100.0, HL_MODE_AUTOMATIC, 0.0, 0.5, 0,
                      &total) == HL_ERR_ARGUMENT);
}

TEST_CASE("lambert w parity and branch domain") {
  double w = 0.0;
  CHECK(hl_lambert_w(16.0, &w) == HL_OK);
  CHECK(w == doctest::Approx(2.0531927174626485).epsilon(1e-14));
  CHECK(hl_lambert_w(std::exp(1.0), &w) == HL_OK);
  CHECK(w == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(hl_lambert_w(-0.375, &w) == HL_ERR_DOMAIN);
  CHECK(hl_lambert_w(std::nan(""), &w) == HL_ERR_DOMAIN);
}

TEST_CASE("closed-form solvers return the frozen optima") {
  hl_optimal_result res{};

  SUBCASE("small model") {
    hl_loss_params p = base_params();
    p.k2 = 3.14159265358979323846;  // makes C0 exactly 1 in doubles
    CHECK(hl_optimal_d_small_model(&p, std::exp(4.0), &res) == HL_OK);
    CHECK(res.d_star == doctest::Approx(3.8963707264101646).epsilon(1e-12));
    CHECK(res.d_star_int == 4);
    CHECK(res.h_star == -1);
    CHECK(res.method == HL_SOLVER_SMALL_MODEL);
    CHECK(res.regime_used == HL_REGIME_DENSE);
    CHECK(res.lambert_value ==
          doctest::Approx(2.0531927174626485).epsilon(1e-12));
    CHECK(res.lambert_approx == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(res.saturated == 0);
  }
  SUBCASE("large model: exact power law") {
    hl_loss_params p = base_params();
    p.noise_total = 1.0;  // the large-model balance needs a noise floor
    CHECK(hl_optimal_d_large_model(&p, 1.0, 1024.0, &res) == HL_OK);
    CHECK(res.d_star == doctest::Approx(32.0).epsilon(1e-15));
    CHECK(res.method == HL_SOLVER_LARGE_MODEL);
    CHECK(std::isnan(res.lambert_value));
  }
  SUBCASE("scarce: quadratic-root and simple forms") {
    hl_loss_params p = base_params();
    CHECK(hl_optimal_d_scarce(&p, 1e6, 0, &res) == HL_OK);
    CHECK(res.d_star == doctest::Approx(9.233456192126495).epsilon(1e-12));
    CHECK(res.regime_used == HL_REGIME_SCARCE);
    CHECK(res.method == HL_SOLVER_SCARCE);
    CHECK(hl_optimal_d_scarce(&p, 1e6, 1, &res) == HL_OK);
    CHECK(res.d_star == doctest::Approx(3.5076429023943234).epsilon(1e-12));
  }
  SUBCASE("numeric matches scarce closed form's neighborhood") {
    hl_loss_params p = base_params();
    CHECK(hl_optimal_d_numeric(&p, 1.0, 1e6, HL_REGIME_SCARCE, 1, 64, 0,
                               &res) == HL_OK);
    CHECK(res.d_star_int == 9);
    CHECK(res.method == HL_SOLVER_NUMERIC);
  }
  SUBCASE("null params propagate as argument errors") {
    CHECK(hl_optimal_d_small_model(nullptr, 64.0, &res) == HL_ERR_ARGUMENT);
    hl_loss_params p = base_params();
    CHECK(hl_optimal_d_small_model(&p, 64.0, nullptr) == HL_ERR_ARGUMENT);
  }
}

TEST_CASE("horizon mapping round trip") {
  int d = 0;
  CHECK(hl_d_of_horizon(0.5, 4096, 100, &d) == HL_OK);
  CHECK(d == 50);  // round(0.5 * 100), clamped to [1, d_total]
  CHECK(hl_d_of_horizon(0.5, 8, 100, &d) == HL_OK);
  CHECK(d == 8);  // clamp at d_total

  int h = 0, saturated = -1;
  CHECK(hl_optimal_horizon(0.5, 4096, 8, &h, &saturated) == HL_OK);
  CHECK(h == 15);  // smallest H with round(0.5 H) >= 8
  CHECK(saturated == 0);
  // The returned horizon must map back to the requested dimension.
  CHECK(hl_d_of_horizon(0.5, 4096, h, &d) == HL_OK);
  CHECK(d == 8);

  // Saturation: a target past the map's reach aims at d_total instead.
  CHECK(hl_optimal_horizon(0.5, 8, 20, &h, &saturated) == HL_OK);
  CHECK(h == 15);
  CHECK(saturated == 1);
  CHECK(hl_optimal_horizon(0.5, 8, 20, &h, nullptr) == HL_OK);  // optional out
}

TEST_CASE("spectrum scalars: eigenvalue and tail variance") {
  hl_spectrum_config cfg = base_spectrum();
  double out = 0.0;
  CHECK(hl_eigenvalue(&cfg, 1, &out) == HL_OK);
  CHECK(out == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hl_eigenvalue(&cfg, 4, &out) == HL_OK);
  CHECK(out == doctest::Approx(1.0 / 16.0).epsilon(1e-15));

  // Exact truncated tail: sum_{i=11..16} i^-2 with d_total = 16.
  double exact_tail = 0.0;
  for (int i = 11; i <= 16; ++i) exact_tail += 1.0 / (double(i) * i);
  CHECK(hl_tail_variance(&cfg, 10, 0, &out) == HL_OK);
  CHECK(out == doctest::Approx(exact_tail).epsilon(1e-14));
  // Closed-form approximation: lambda0 d^(1-alpha) / (alpha-1) = 0.1.
  CHECK(hl_tail_variance(&cfg, 10, 1, &out) == HL_OK);
  CHECK(out == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(hl_tail_variance(&cfg, 17, 0, &out) == HL_ERR_RANGE);
}

TEST_CASE("dataset generation, buffers, and CSV round trip") {
  hl_spectrum_config cfg = base_spectrum();
  hl_noise_config noise = quiet_noise();
  hl_dataset* ds = nullptr;
  REQUIRE(hl_generate_dataset(&cfg, &noise, 1.0, 0.05, 2, 7, 1.0, 32, 0, 6,
                              &ds) == HL_OK);
  REQUIRE(ds != nullptr);
  CHECK(hl_dataset_rows(ds) == 32);
  CHECK(hl_dataset_d_visible(ds) == 6);  // override wins over the mapping
  CHECK(hl_dataset_d_out(ds) == 2);

  std::vector<double> inputs(32 * 6), targets(32 * 2);
  CHECK(hl_dataset_inputs(ds, inputs.data(), int64_t(inputs.size())) == HL_OK);
  CHECK(hl_dataset_targets(ds, targets.data(), int64_t(targets.size())) ==
        HL_OK);
  CHECK(hl_dataset_inputs(ds, inputs.data(), 5) == HL_ERR_ARGUMENT);
  CHECK(std::string(hl_last_error()) == "buffer too small");
  CHECK(hl_dataset_inputs(ds, nullptr, 192) == HL_ERR_ARGUMENT);

  // Same config, fresh handle: byte-identical buffers (determinism).
  hl_dataset* ds2 = nullptr;
  REQUIRE(hl_generate_dataset(&cfg, &noise, 1.0, 0.05, 2, 7, 1.0, 32, 0, 6,
                              &ds2) == HL_OK);
  std::vector<double> inputs2(32 * 6);
  CHECK(hl_dataset_inputs(ds2, inputs2.data(), int64_t(inputs2.size())) ==
        HL_OK);
  CHECK(std::memcmp(inputs.data(), inputs2.data(),
                    inputs.size() * sizeof(double)) == 0);
  hl_dataset_free(ds2);

  // Write to CSV and read the file back through the table API.
  const std::string path = temp_path("dataset.csv");
  FileGuard guard(path);
  REQUIRE(hl_dataset_write_csv(ds, path.c_str()) == HL_OK);
  hl_table* tbl = nullptr;
  REQUIRE(hl_load_table(path.c_str(), HL_HEADER_DETECT, HL_GAP_REJECT, &tbl) ==
          HL_OK);
  CHECK(hl_table_rows(tbl) == 32);
  CHECK(hl_table_cols(tbl) == 8);  // 6 inputs + 2 targets
  CHECK(std::string(hl_table_column_name(tbl, 0)) == "x_1");
  CHECK(std::string(hl_table_column_name(tbl, 6)) == "y_1");
  CHECK(hl_table_column_name(tbl, 8) == nullptr);
  CHECK(hl_table_column_name(nullptr, 0) == nullptr);

  std::vector<double> col(32);
  REQUIRE(hl_table_column(tbl, 2, col.data(), 32) == HL_OK);
  for (int r = 0; r < 32; ++r)
    CHECK(col[size_t(r)] == doctest::Approx(inputs[size_t(r) * 6 + 2])
                                .epsilon(1e-12));
  CHECK(hl_table_column(tbl, 99, col.data(), 32) == HL_ERR_RANGE);
  CHECK(hl_table_column(tbl, 2, col.data(), 3) == HL_ERR_ARGUMENT);
  hl_table_free(tbl);
  hl_dataset_free(ds);
  hl_dataset_free(nullptr);  // no-op
}

TEST_CASE("spectrum estimation from the bundled series file") {
  const std::string path = std::string(DATA_DIR) + "/zipf_alpha15.csv";
  hl_spectrum_result* res = nullptr;
  REQUIRE(hl_estimate_spectrum_csv(path.c_str(), HL_HEADER_DETECT,
                                   HL_GAP_REJECT, 32, 4, 1, 2, 24, 1,
                                   &res) == HL_OK);
  REQUIRE(res != nullptr);
  CHECK(hl_spectrum_count(res) == 32);
  CHECK(hl_spectrum_alpha_z_hat(res) ==
        doctest::Approx(1.5135731441469065).epsilon(1e-12));
  // Windowed covariance of a finite series bends the log-log line a little;
  // the fit is clearly linear but not textbook-straight.
  CHECK(hl_spectrum_r_squared(res) > 0.85);
  CHECK(hl_spectrum_fit_i_min(res) == 2);
  CHECK(hl_spectrum_fit_i_max(res) == 24);
  CHECK(hl_spectrum_flat(res) == 0);
  CHECK(hl_spectrum_lambda0_hat(res) > 0.0);
  CHECK(hl_spectrum_slope_stderr(res) > 0.0);

  std::vector<double> ev(32);
  REQUIRE(hl_spectrum_eigenvalues(res, ev.data(), 32) == HL_OK);
  CHECK(ev[0] > ev[1]);  // descending
  CHECK(ev[31] >= 0.0);
  CHECK(hl_spectrum_eigenvalues(res, ev.data(), 8) == HL_ERR_ARGUMENT);

  int k = 0;
  CHECK(hl_spectrum_intrinsic_dim(res, 0.9, &k) == HL_OK);
  CHECK(k >= 1);
  CHECK(k <= 32);
  hl_spectrum_free(res);
  hl_spectrum_free(nullptr);

  // A constant series normalizes to all-zero windows: no usable spectrum.
  const std::string flat_path = temp_path("flat.csv");
  FileGuard guard(flat_path);
  {
    std::ofstream out(flat_path);
    out << "v\n";
    for (int i = 0; i < 200; ++i) out << "3.25\n";
  }
  hl_spectrum_result* flat = nullptr;
  CHECK(hl_estimate_spectrum_csv(flat_path.c_str(), HL_HEADER_DETECT,
                                 HL_GAP_REJECT, 8, 1, 1, 2, 6, 1,
                                 &flat) == HL_ERR_DOMAIN);
  CHECK(flat == nullptr);
  CHECK(std::string(hl_last_error()) == "leading eigenvalue must be positive");
}

TEST_CASE("direct zip-f fit and intrinsic dimension") {
  // lambda_i = 2.5 i^-1.7: the fit must recover both parameters exactly.
  std::vector<double> ev(64);
  for (int i = 1; i <= 64; ++i)
    ev[size_t(i - 1)] = 2.5 * std::pow(double(i), -1.7);
  hl_zipf_fit fit{};
  REQUIRE(hl_fit_zipf(ev.data(), 64, 2, 32, 0.0, 0.0, &fit) == HL_OK);
  CHECK(fit.alpha_z_hat == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(fit.lambda0_hat == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.flat_spectrum == 0);
  CHECK(hl_fit_zipf(nullptr, 64, 2, 32, 0.0, 0.0, &fit) == HL_ERR_ARGUMENT);
  CHECK(hl_fit_zipf(ev.data(), 64, 2, 3, 0.0, 0.0, &fit) == HL_ERR_ARGUMENT);

  int k = 0;
  // Energies 0.4 / 0.3 / 0.2 / 0.1: 85% of mass needs the first two modes.
  const double walk[] = {0.4, 0.3, 0.2, 0.1};
  REQUIRE(hl_intrinsic_dim(walk, 4, 0.69, &k) == HL_OK);
  CHECK(k == 2);
  REQUIRE(hl_intrinsic_dim(walk, 4, 0.71, &k) == HL_OK);
  CHECK(k == 3);
  CHECK(hl_intrinsic_dim(walk, 4, 1.5, &k) == HL_ERR_ARGUMENT);
}

TEST_CASE("curve comparison over the bundled power-offset data") {
  hl_table* tbl = nullptr;
  const std::string path = std::string(DATA_DIR) + "/curve_power_offset.csv";
  REQUIRE(hl_load_table(path.c_str(), HL_HEADER_DETECT, HL_GAP_REJECT, &tbl) ==
          HL_OK);
  const int64_t n = hl_table_rows(tbl);
  REQUIRE(n >= 4);
  std::vector<double> xs(static_cast<size_t>(n));
  std::vector<double> ys(static_cast<size_t>(n));
  REQUIRE(hl_table_column(tbl, 0, xs.data(), n) == HL_OK);
  REQUIRE(hl_table_column(tbl, 1, ys.data(), n) == HL_OK);
  hl_table_free(tbl);

  hl_curve_report* rep = nullptr;
  REQUIRE(hl_fit_curves(xs.data(), ys.data(), n, 0.0, 0.0, &rep) == HL_OK);
  REQUIRE(rep != nullptr);
  CHECK(hl_curve_count(rep) == 4);

  // Best model first; the bundled data is y = 0.4 + 2.5 x^-0.9, noiseless.
  CHECK(std::string(hl_curve_model_name(rep, 0)) == "power_offset");
  CHECK(hl_curve_param_count(rep, 0) == 3);
  double params[3] = {};
  REQUIRE(hl_curve_params(rep, 0, params, 3) == HL_OK);
  CHECK(params[0] == doctest::Approx(0.4).epsilon(1e-6));
  CHECK(params[1] == doctest::Approx(2.5).epsilon(1e-6));
  CHECK(params[2] == doctest::Approx(0.9).epsilon(1e-6));
  CHECK(hl_curve_rss(rep, 0) < 1e-10);
  CHECK(std::isfinite(hl_curve_aic(rep, 0)));
  CHECK(hl_curve_bic(rep, 0) >= hl_curve_aic(rep, 0));
  CHECK(hl_curve_skipped(rep, 0) == 0);
  CHECK(hl_curve_alpha_unidentifiable(rep, 0) == 0);
  CHECK(hl_curve_params(rep, 0, params, 2) == HL_ERR_ARGUMENT);
  CHECK(hl_curve_params(rep, 99, params, 3) == HL_ERR_ARGUMENT);
  CHECK(std::string(hl_curve_model_name(rep, 99)).empty());

  // JSON rendering must satisfy the bundled report schema.
  char* doc = nullptr;
  REQUIRE(hl_curve_report_json(rep, &doc) == HL_OK);
  REQUIRE(doc != nullptr);
  const std::string schema =
      read_file(std::string(SCHEMA_DIR) + "/curve_report.schema.json");
  char* err = nullptr;
  CHECK(hl_validate_json(schema.c_str(), doc, &err) == HL_OK);
  CHECK(err == nullptr);
  CHECK(std::string(doc).find("\"best\": \"power_offset\"") !=
        std::string::npos);
  hl_string_free(doc);
  hl_curve_free(rep);
  hl_curve_free(nullptr);

  CHECK(hl_fit_curves(xs.data(), ys.data(), 3, 0.0, 0.0, &rep) ==
        HL_ERR_ARGUMENT);  // underdetermined
  CHECK(std::string(hl_last_error()).find("need at least 4 points") !=
        std::string::npos);
}

TEST_CASE("experiment runner: config dispatch, report getters, serializers") {
  const char* config = R"({
    "experiment": "quantizer_distortion",
    "d": 1,
    "values": [4, 8, 16],
    "samples": 10000,
    "trials": 2,
    "seed": 99,
    "threads": 1
  })";
  hl_experiment_report* rep = nullptr;
  REQUIRE(hl_run_experiment_json(config, &rep) == HL_OK);
  REQUIRE(rep != nullptr);
  CHECK(std::string(hl_report_experiment(rep)) == "quantizer_distortion");
  CHECK(hl_report_point_count(rep) == 3);
  CHECK(hl_report_theory_exponent(rep) == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(hl_report_fitted_exponent(rep) ==
        doctest::Approx(-4.0).epsilon(0.05));
  CHECK(hl_report_argmin_x(rep) == doctest::Approx(16.0).epsilon(1e-12));

  char* doc = nullptr;
  REQUIRE(hl_report_json(rep, &doc) == HL_OK);
  const std::string schema =
      read_file(std::string(SCHEMA_DIR) + "/experiment_report.schema.json");
  char* err = nullptr;
  CHECK(hl_validate_json(schema.c_str(), doc, &err) == HL_OK);
  CHECK(err == nullptr);

  // Same config, fresh run: the JSON must be byte-identical.
  hl_experiment_report* rep2 = nullptr;
  REQUIRE(hl_run_experiment_json(config, &rep2) == HL_OK);
  char* doc2 = nullptr;
  REQUIRE(hl_report_json(rep2, &doc2) == HL_OK);
  CHECK(std::string(doc) == std::string(doc2));
  hl_string_free(doc2);
  hl_report_free(rep2);
  hl_string_free(doc);

  char* csv = nullptr;
  REQUIRE(hl_report_csv(rep, &csv) == HL_OK);
  CHECK(std::string(csv).rfind("x,mean,stderr,theory\n", 0) == 0);
  hl_string_free(csv);
  hl_report_free(rep);
  hl_report_free(nullptr);

  hl_experiment_report* bad = nullptr;
  CHECK(hl_run_experiment_json(R"({"experiment":"nope","values":[1,2,3]})",
                               &bad) == HL_ERR_ARGUMENT);
  CHECK(std::string(hl_last_error()).find("unknown experiment") !=
        std::string::npos);
  CHECK(hl_run_experiment_json("{not json", &bad) == HL_ERR_PARSE);
  CHECK(hl_run_experiment_json(nullptr, &bad) == HL_ERR_ARGUMENT);
}

TEST_CASE("json schema validation: positive, negative, and error text") {
  const char* schema = R"({
    "type": "object",
    "required": ["name", "count"],
    "additionalProperties": false,
    "properties": {
      "name": {"type": "string"},
      "count": {"type": "integer", "minimum": 0}
    }
  })";

  char* err = nullptr;
  CHECK(hl_validate_json(schema, R"({"name":"a","count":3})", &err) == HL_OK);
  CHECK(err == nullptr);

  CHECK(hl_validate_json(schema, R"({"name":"a"})", &err) == HL_ERR_PARSE);
  REQUIRE(err != nullptr);
  CHECK(std::string(err).find("count") != std::string::npos);
  hl_string_free(err);
  err = nullptr;

  CHECK(hl_validate_json(schema, R"({"name":"a","count":3,"zz":1})", &err) ==
        HL_ERR_PARSE);
  REQUIRE(err != nullptr);
  CHECK(std::string(err).find("zz") != std::string::npos);
  hl_string_free(err);
  err = nullptr;

  CHECK(hl_validate_json(schema, R"({"name":4,"count":3})", &err) ==
        HL_ERR_PARSE);
  REQUIRE(err != nullptr);
  hl_string_free(err);
  err = nullptr;

  // error_out is optional; malformed schema or doc is a parse failure.
  CHECK(hl_validate_json(schema, R"({"name":"a"})", nullptr) == HL_ERR_PARSE);
  CHECK(hl_validate_json("{bad", R"({})", &err) == HL_ERR_PARSE);
  CHECK(hl_validate_json(schema, "{bad", &err) == HL_ERR_PARSE);
  CHECK(hl_validate_json(nullptr, "{}", &err) == HL_ERR_ARGUMENT);
}

}  // TEST_SUITE
