#include "horizonlaw/mc_oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <json.hpp>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "horizonlaw/csv.hpp"
#include "horizonlaw/curve_fit.hpp"
#include "horizonlaw/parallel.hpp"
#include "horizonlaw/rng.hpp"

namespace horizonlaw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
  MeanSe out;
  const double n = static_cast<double>(v.size());
  for (double x : v) out.mean += x;
  out.mean /= n;
  if (v.size() < 2) return out;
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

// Log-log OLS over points with positive x and mean.
void fill_exponent(ExperimentReport& rep) {
  std::vector<double> lx, ly;
  for (const auto& pt : rep.points)
    if (pt.x > 0.0 && pt.mean > 0.0) {
      lx.push_back(std::log(pt.x));
      ly.push_back(std::log(pt.mean));
    }
  if (lx.size() < 2) {
    rep.fitted_exponent = kNaN;
    rep.fit_r_squared = kNaN;
    return;
  }
  const LinearFit fit = linear_fit(lx, ly);
  rep.fitted_exponent = fit.slope;
  rep.fit_r_squared = fit.r_squared;
}

void fill_argmin(ExperimentReport& rep) {
  double best = std::numeric_limits<double>::infinity();
  rep.argmin_x = kNaN;
  for (const auto& pt : rep.points)
    if (pt.mean < best) {
      best = pt.mean;
      rep.argmin_x = pt.x;
    }
}

void check_sweep_common(const SweepSpec& spec) {
  if (spec.values.size() < 3)
    throw std::invalid_argument("a sweep needs at least 3 values");
  for (double v : spec.values)
    if (!std::isfinite(v)) throw std::invalid_argument("sweep values must be finite");
  if (spec.trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (spec.queries < 1) throw std::invalid_argument("queries must be at least 1");
  if (spec.d_out < 1) throw std::invalid_argument("d_out must be at least 1");
}

LossParams theory_params(const SweepSpec& spec) {
  LossParams p;
  p.k1 = spec.loss.k1;
  p.k2 = spec.loss.k2;
  p.eta = spec.noise.eta;
  p.lambda0 = spec.spectrum.lambda0;
  p.alpha_z = spec.spectrum.alpha_z;
  p.noise_total = spec.noise.total_variance();
  return p;
}

// ---------------------------------------------------------------------------
// Piecewise-linear learner shared by the pwl and downsample experiments.

struct PwlCase {
  int d_data = 1;           // visible width of the generated data
  int d_used = 1;           // coordinates the learner actually consumes
  std::int64_t n_regions = 1;
  std::int64_t d_samples = 1;
};

// Equal-probability axis bins via the exact per-coordinate Gaussian CDF.
struct CellBinner {
  int d_grid = 0;
  int cells = 1;
  Eigen::VectorXd inv_sd;  // 1/sqrt(lambda_j)

  std::int64_t cell_of(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    std::int64_t id = 0;
    for (int j = 0; j < d_grid; ++j) {
      const double z = x(j) * inv_sd(j);
      const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
      int b = static_cast<int>(cdf * cells);
      b = std::clamp(b, 0, cells - 1);
      id = id * cells + b;
    }
    return id;
  }
};

double pwl_trial_loss(const SweepSpec& spec, const TargetFunction& target,
                      const PwlCase& pc, std::int64_t point, std::int64_t trial) {
  SpectrumConfig train_cfg = spec.spectrum;
  train_cfg.seed = derive_seed(spec.seed, "pwl-train", static_cast<std::uint64_t>(point),
                               static_cast<std::uint64_t>(trial));
  SpectrumConfig test_cfg = spec.spectrum;
  test_cfg.seed = derive_seed(spec.seed, "pwl-test", static_cast<std::uint64_t>(point),
                              static_cast<std::uint64_t>(trial));
  HorizonMapping map{static_cast<double>(pc.d_data), spec.spectrum.d_total};

  const SyntheticDataset train =
      generate_dataset(train_cfg, spec.noise, target, map, pc.d_samples, 1);
  const SyntheticDataset test =
      generate_dataset(test_cfg, spec.noise, target, map, spec.queries, 1);

  const int d_used = pc.d_used;
  CellBinner binner;
  binner.cells = spec.cells_per_axis;
  if (pc.n_regions >= 2 && spec.cells_per_axis >= 2) {
    const double raw = std::log(static_cast<double>(pc.n_regions)) /
                       std::log(static_cast<double>(spec.cells_per_axis));
    binner.d_grid = std::min<int>(d_used, static_cast<int>(std::lround(raw)));
    if (binner.d_grid < 0) binner.d_grid = 0;
  }
  binner.inv_sd.resize(binner.d_grid);
  for (int j = 0; j < binner.d_grid; ++j)
    binner.inv_sd(j) = 1.0 / std::sqrt(eigenvalue(spec.spectrum, j + 1));

  const Eigen::MatrixXd x_train = train.inputs.leftCols(d_used);
  std::unordered_map<std::int64_t, std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(pc.n_regions) * 2);
  for (Eigen::Index r = 0; r < x_train.rows(); ++r)
    cells[binner.cell_of(x_train.row(r))].push_back(static_cast<int>(r));

  const int d_out = target.d_out();
  const Eigen::RowVectorXd global_mean = train.targets.colwise().mean();

  // Per-cell model: OLS with intercept when the cell is populated enough,
  // otherwise the cell mean.
  struct CellModel {
    bool linear = false;
    Eigen::MatrixXd coef;       // (d_used + 1) x d_out
    Eigen::RowVectorXd mean;
  };
  std::unordered_map<std::int64_t, CellModel> models;
  models.reserve(cells.size());
  for (const auto& [id, idx] : cells) {
    CellModel model;
    const int k = static_cast<int>(idx.size());
    // Twice the parameter count, or the fit is noise-dominated.
    if (k >= 2 * (d_used + 1)) {
      Eigen::MatrixXd design(k, d_used + 1);
      Eigen::MatrixXd y(k, d_out);
      for (int r = 0; r < k; ++r) {
        design(r, 0) = 1.0;
        design.row(r).tail(d_used) = x_train.row(idx[static_cast<std::size_t>(r)]);
        y.row(r) = train.targets.row(idx[static_cast<std::size_t>(r)]);
      }
      model.linear = true;
      model.coef = design.colPivHouseholderQr().solve(y);
    } else {
      Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(d_out);
      for (int r : idx) sum += train.targets.row(r);
      model.mean = sum / static_cast<double>(k);
    }
    models.emplace(id, std::move(model));
  }

  const Eigen::MatrixXd x_test = test.inputs.leftCols(d_used);
  double err = 0.0;
  Eigen::RowVectorXd pred(d_out);
  for (Eigen::Index r = 0; r < x_test.rows(); ++r) {
    const auto it = models.find(binner.cell_of(x_test.row(r)));
    if (it == models.end()) {
      pred = global_mean;
    } else if (it->second.linear) {
      pred = it->second.coef.row(0);
      pred.noalias() += x_test.row(r) * it->second.coef.bottomRows(d_used);
    } else {
      pred = it->second.mean;
    }
    err += (test.targets.row(r) - pred).squaredNorm();
  }
  return err / static_cast<double>(x_test.rows());
}

ExperimentReport run_pwl_like(const SweepSpec& spec, bool downsample) {
  const auto start = Clock::now();
  check_sweep_common(spec);
  validate(spec.spectrum);
  validate(spec.noise);
  if (spec.cells_per_axis < 1)
    throw std::invalid_argument("cells_per_axis must be at least 1");

  if (downsample) {
    if (spec.variable != SweepVariable::d_eff)
      throw std::invalid_argument("downsample experiments sweep d_eff");
  } else if (spec.variable != SweepVariable::d_visible &&
             spec.variable != SweepVariable::n_regions &&
             spec.variable != SweepVariable::d_samples) {
    throw std::invalid_argument("pwl experiments sweep d, N, or D");
  }

  const int n_points = static_cast<int>(spec.values.size());
  std::vector<PwlCase> cases(static_cast<std::size_t>(n_points));
  for (int p = 0; p < n_points; ++p) {
    PwlCase pc;
    pc.d_data = spec.d_visible;
    pc.n_regions = spec.n_regions;
    pc.d_samples = spec.d_samples;
    const double v = spec.values[static_cast<std::size_t>(p)];
    switch (spec.variable) {
      case SweepVariable::d_visible:
        pc.d_data = static_cast<int>(std::llround(v));
        break;
      case SweepVariable::n_regions:
        pc.n_regions = std::llround(v);
        break;
      case SweepVariable::d_samples:
        pc.d_samples = std::llround(v);
        break;
      case SweepVariable::d_eff:
        break;
      default:
        throw std::invalid_argument("unsupported sweep variable");
    }
    pc.d_used = downsample ? static_cast<int>(std::llround(v)) : pc.d_data;
    if (pc.d_data < 1 || pc.d_data > spec.spectrum.d_total)
      throw std::invalid_argument("d outside [1, d_total]");
    if (pc.d_used < 1 || pc.d_used > pc.d_data)
      throw std::invalid_argument("d_eff outside [1, d_visible]");
    if (pc.n_regions < 1) throw std::invalid_argument("N must be at least 1");
    if (pc.d_samples < 1) throw std::invalid_argument("D must be at least 1");
    cases[static_cast<std::size_t>(p)] = pc;
  }

  const TargetFunction target =
      make_target(spec.spectrum, spec.loss.k1, spec.loss.k2, spec.d_out,
                  derive_seed(spec.seed, "pwl-target"));

  std::vector<std::vector<double>> losses(
      static_cast<std::size_t>(n_points),
      std::vector<double>(static_cast<std::size_t>(spec.trials)));
  parallel_for(static_cast<std::int64_t>(n_points) * spec.trials, spec.threads,
               [&](std::int64_t task) {
                 const std::int64_t p = task / spec.trials;
                 const std::int64_t t = task % spec.trials;
                 losses[static_cast<std::size_t>(p)][static_cast<std::size_t>(t)] =
                     pwl_trial_loss(spec, target, cases[static_cast<std::size_t>(p)],
                                    p, t);
               });

  ExperimentReport rep;
  rep.experiment = downsample ? "downsample" : "pwl_learner";
  rep.variable = spec.variable;
  rep.metric = "test_mse";
  rep.trials = spec.trials;
  rep.seed = spec.seed;

  const LossParams theory = theory_params(spec);
  for (int p = 0; p < n_points; ++p) {
    const PwlCase& pc = cases[static_cast<std::size_t>(p)];
    ExperimentPoint pt;
    pt.x = spec.values[static_cast<std::size_t>(p)];
    const MeanSe ms = mean_se(losses[static_cast<std::size_t>(p)]);
    pt.mean = ms.mean;
    pt.std_error = ms.se;
    pt.theory = total_loss(theory, static_cast<double>(pc.d_used),
                           static_cast<double>(pc.n_regions),
                           static_cast<double>(pc.d_samples), RegimeMode::dense);
    rep.points.push_back(pt);
  }

  if (spec.variable == SweepVariable::d_samples)
    fill_exponent(rep);
  else {
    rep.fitted_exponent = kNaN;
    rep.fit_r_squared = kNaN;
  }
  rep.theory_exponent = kNaN;
  fill_argmin(rep);
  std::ostringstream notes;
  notes << "cells_per_axis=" << spec.cells_per_axis << " d_out=" << spec.d_out;
  rep.notes = notes.str();
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

}  // namespace

const char* sweep_variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::d_samples: return "D";
    case SweepVariable::n_regions: return "N";
    case SweepVariable::d_visible: return "d";
    case SweepVariable::d_eff: return "d_eff";
    case SweepVariable::horizon: return "H";
  }
  return "?";
}

ExperimentReport nn_risk_experiment(const SweepSpec& spec) {
  const auto start = Clock::now();
  check_sweep_common(spec);
  if (spec.variable != SweepVariable::d_samples)
    throw std::invalid_argument("the nn experiment sweeps D");
  const int d = spec.d_visible;
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  for (double v : spec.values)
    if (v < 1.0) throw std::invalid_argument("every D must be at least 1");

  // Unit-variance proxy space for the k1-Lipschitz linear target.
  SpectrumConfig proxy;
  proxy.lambda0 = 1.0;
  proxy.alpha_z = 1.5;
  proxy.d_total = d;
  const TargetFunction target = make_target(
      proxy, spec.loss.k1, 0.0, spec.d_out, derive_seed(spec.seed, "nn-target"));

  const int n_points = static_cast<int>(spec.values.size());
  std::vector<std::vector<double>> dist_sq(
      static_cast<std::size_t>(n_points),
      std::vector<double>(static_cast<std::size_t>(spec.trials)));
  auto mse = dist_sq;

  parallel_for(
      static_cast<std::int64_t>(n_points) * spec.trials, spec.threads,
      [&](std::int64_t task) {
        const std::int64_t p = task / spec.trials;
        const std::int64_t t = task % spec.trials;
        Rng rng(derive_seed(spec.seed, "nn", static_cast<std::uint64_t>(p),
                            static_cast<std::uint64_t>(t)));
        const std::int64_t big_d =
            std::llround(spec.values[static_cast<std::size_t>(p)]);

        Eigen::MatrixXd train(d, big_d);  // one point per column
        for (Eigen::Index c = 0; c < train.cols(); ++c)
          for (int r = 0; r < d; ++r)
            train(r, c) = spec.nn_distribution == NnDistribution::latent
                              ? rng.normal()
                              : rng.uniform();
        Eigen::MatrixXd queries(d, spec.queries);
        for (Eigen::Index c = 0; c < queries.cols(); ++c)
          for (int r = 0; r < d; ++r)
            queries(r, c) = spec.nn_distribution == NnDistribution::latent
                                ? rng.normal()
                                : rng.uniform();

        const Eigen::MatrixXd y_train = target.linear * train;
        const Eigen::VectorXd train_sq = train.colwise().squaredNorm();

        double sum_dist = 0.0, sum_err = 0.0;
        for (Eigen::Index q = 0; q < queries.cols(); ++q) {
          // argmin over ||t_j||^2 - 2 t_j . q; recompute the winning distance
          // directly to avoid cancellation.
          const Eigen::VectorXd score =
              train_sq - 2.0 * (train.transpose() * queries.col(q));
          Eigen::Index best;
          score.minCoeff(&best);
          sum_dist += (train.col(best) - queries.col(q)).squaredNorm();
          sum_err +=
              (y_train.col(best) - target.linear * queries.col(q)).squaredNorm();
        }
        dist_sq[static_cast<std::size_t>(p)][static_cast<std::size_t>(t)] =
            sum_dist / spec.queries;
        mse[static_cast<std::size_t>(p)][static_cast<std::size_t>(t)] =
            sum_err / spec.queries;
      });

  ExperimentReport rep;
  rep.experiment = "nn_risk";
  rep.variable = SweepVariable::d_samples;
  rep.metric = "mean_squared_nn_distance";
  rep.secondary_metric = "mean_squared_error";
  rep.trials = spec.trials;
  rep.seed = spec.seed;
  for (int p = 0; p < n_points; ++p) {
    ExperimentPoint pt;
    pt.x = spec.values[static_cast<std::size_t>(p)];
    const MeanSe ms = mean_se(dist_sq[static_cast<std::size_t>(p)]);
    pt.mean = ms.mean;
    pt.std_error = ms.se;
    pt.theory = (d / (4.0 * kPi)) * std::pow(pt.x, -2.0 / d);
    rep.points.push_back(pt);
    rep.secondary_mean.push_back(mean_se(mse[static_cast<std::size_t>(p)]).mean);
  }
  fill_exponent(rep);
  rep.theory_exponent = -2.0 / d;
  fill_argmin(rep);
  rep.notes = spec.nn_distribution == NnDistribution::latent
                  ? "distribution=latent d=" + std::to_string(d)
                  : "distribution=uniform_cube d=" + std::to_string(d);
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

ExperimentReport quantizer_distortion_experiment(
    int d, const std::vector<std::int64_t>& cells_per_axis, std::int64_t samples,
    int trials, std::uint64_t seed, int threads) {
  const auto start = Clock::now();
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  if (cells_per_axis.empty()) throw std::invalid_argument("no grid sizes given");
  for (std::int64_t m : cells_per_axis)
    if (m < 1) throw std::invalid_argument("cells_per_axis entries must be >= 1");
  if (samples < 10000)
    throw std::invalid_argument("samples must be at least 10000");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");

  const int n_points = static_cast<int>(cells_per_axis.size());
  for (std::int64_t m : cells_per_axis)
    if (d * std::log(static_cast<double>(m)) > std::log(9e18))
      throw std::invalid_argument("cell count m^d overflows");

  std::vector<std::vector<double>> vals(
      static_cast<std::size_t>(n_points),
      std::vector<double>(static_cast<std::size_t>(trials)));
  parallel_for(
      static_cast<std::int64_t>(n_points) * trials, threads, [&](std::int64_t task) {
        const std::int64_t p = task / trials;
        const std::int64_t t = task % trials;
        Rng rng(derive_seed(seed, "quantizer", static_cast<std::uint64_t>(p),
                            static_cast<std::uint64_t>(t)));
        const double m = static_cast<double>(cells_per_axis[static_cast<std::size_t>(p)]);
        double acc = 0.0;
        for (std::int64_t s = 0; s < samples; ++s) {
          double dist2 = 0.0;
          for (int j = 0; j < d; ++j) {
            const double x = rng.uniform();
            const double q = (std::floor(x * m) + 0.5) / m;
            dist2 += (x - q) * (x - q);
          }
          acc += dist2 * dist2;
        }
        vals[static_cast<std::size_t>(p)][static_cast<std::size_t>(t)] =
            acc / static_cast<double>(samples);
      });

  ExperimentReport rep;
  rep.experiment = "quantizer_distortion";
  rep.variable = SweepVariable::n_regions;
  rep.metric = "mean_quartic_quantization_error";
  rep.trials = trials;
  rep.seed = seed;
  for (int p = 0; p < n_points; ++p) {
    const double m = static_cast<double>(cells_per_axis[static_cast<std::size_t>(p)]);
    ExperimentPoint pt;
    pt.x = std::pow(m, d);  // N = m^d
    const MeanSe ms = mean_se(vals[static_cast<std::size_t>(p)]);
    pt.mean = ms.mean;
    pt.std_error = ms.se;
    const double h4 = 1.0 / (m * m * m * m);
    pt.theory = h4 * (d / 80.0 + d * (d - 1.0) / 144.0);
    rep.points.push_back(pt);
  }
  fill_exponent(rep);
  rep.theory_exponent = -4.0 / d;
  fill_argmin(rep);
  rep.notes = "d=" + std::to_string(d);
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

ExperimentReport pwl_learner_experiment(const SweepSpec& spec) {
  return run_pwl_like(spec, false);
}

ExperimentReport downsample_experiment(const SweepSpec& spec) {
  return run_pwl_like(spec, true);
}

ExperimentReport ols_noise_term_experiment(int d,
                                           const std::vector<std::int64_t>& d_samples,
                                           double noise_var, int trials,
                                           std::uint64_t seed, int threads,
                                           int queries) {
  const auto start = Clock::now();
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  if (d_samples.empty()) throw std::invalid_argument("no sample counts given");
  for (std::int64_t v : d_samples)
    if (v <= d + 1)
      throw std::invalid_argument("every D must exceed d + 1");
  if (!std::isfinite(noise_var) || noise_var < 0.0)
    throw std::invalid_argument("noise_var must be non-negative");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (queries < 1) throw std::invalid_argument("queries must be at least 1");

  const int n_points = static_cast<int>(d_samples.size());
  std::vector<std::vector<double>> vals(
      static_cast<std::size_t>(n_points),
      std::vector<double>(static_cast<std::size_t>(trials)));
  parallel_for(
      static_cast<std::int64_t>(n_points) * trials, threads, [&](std::int64_t task) {
        const std::int64_t p = task / trials;
        const std::int64_t t = task % trials;
        Rng rng(derive_seed(seed, "ols", static_cast<std::uint64_t>(p),
                            static_cast<std::uint64_t>(t)));
        const std::int64_t big_d = d_samples[static_cast<std::size_t>(p)];

        Eigen::VectorXd beta(d);
        for (int j = 0; j < d; ++j) beta(j) = rng.normal();
        beta.normalize();

        Eigen::MatrixXd x(big_d, d);
        for (Eigen::Index r = 0; r < x.rows(); ++r)
          for (int c = 0; c < d; ++c) x(r, c) = rng.normal();
        Eigen::VectorXd y = x * beta;
        const double sd = std::sqrt(noise_var);
        for (Eigen::Index r = 0; r < y.size(); ++r) y(r) += sd * rng.normal();

        const Eigen::VectorXd beta_hat = x.colPivHouseholderQr().solve(y);
        const Eigen::VectorXd delta = beta_hat - beta;

        double acc = 0.0;
        Eigen::VectorXd q(d);
        for (int k = 0; k < queries; ++k) {
          for (int j = 0; j < d; ++j) q(j) = rng.normal();
          const double e = q.dot(delta);
          acc += e * e;
        }
        vals[static_cast<std::size_t>(p)][static_cast<std::size_t>(t)] =
            acc / static_cast<double>(queries);
      });

  ExperimentReport rep;
  rep.experiment = "ols_noise_term";
  rep.variable = SweepVariable::d_samples;
  rep.metric = "excess_risk";
  rep.trials = trials;
  rep.seed = seed;
  for (int p = 0; p < n_points; ++p) {
    ExperimentPoint pt;
    pt.x = static_cast<double>(d_samples[static_cast<std::size_t>(p)]);
    const MeanSe ms = mean_se(vals[static_cast<std::size_t>(p)]);
    pt.mean = ms.mean;
    pt.std_error = ms.se;
    pt.theory = noise_var * d / pt.x;
    rep.points.push_back(pt);
  }
  fill_exponent(rep);
  rep.theory_exponent = -1.0;
  fill_argmin(rep);
  rep.notes = "d=" + std::to_string(d) + " noise_var=" + format_double(noise_var);
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

std::string report_to_json(const ExperimentReport& report) {
  nlohmann::json j;
  j["experiment"] = report.experiment;
  j["variable"] = sweep_variable_name(report.variable);
  j["metric"] = report.metric;
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& pt : report.points) {
    pts.push_back({{"x", pt.x},
                   {"mean", pt.mean},
                   {"std_error", pt.std_error},
                   {"theory", pt.theory}});
  }
  j["points"] = std::move(pts);
  if (!report.secondary_metric.empty()) {
    j["secondary_metric"] = report.secondary_metric;
    j["secondary_mean"] = report.secondary_mean;
  }
  j["fitted_exponent"] = report.fitted_exponent;
  j["theory_exponent"] = report.theory_exponent;
  j["fit_r_squared"] = report.fit_r_squared;
  j["argmin_x"] = report.argmin_x;
  j["trials"] = report.trials;
  j["seed"] = report.seed;
  j["notes"] = report.notes;
  return j.dump(2);
}

std::string report_to_csv(const ExperimentReport& report) {
  std::string out = "x,mean,stderr,theory\n";
  for (const auto& pt : report.points) {
    out += format_double(pt.x);
    out += ',';
    out += format_double(pt.mean);
    out += ',';
    out += format_double(pt.std_error);
    out += ',';
    out += format_double(pt.theory);
    out += '\n';
  }
  return out;
}

}  // namespace horizonlaw
