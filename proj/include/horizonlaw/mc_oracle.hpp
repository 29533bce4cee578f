#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "horizonlaw/intrinsic_model.hpp"
#include "horizonlaw/loss_model.hpp"

namespace horizonlaw {

enum class SweepVariable { d_samples, n_regions, d_visible, d_eff, horizon };

const char* sweep_variable_name(SweepVariable v);  // "D","N","d","d_eff","H"

// How the NN experiment draws points: the latent's top-d coordinates rescaled
// to unit variance (Gaussian), or the unit cube (analytic-oracle mode).
enum class NnDistribution { latent, uniform_cube };

// One sweep: which knob varies, its values, and every fixed parameter any
// experiment might need. Unused fields are ignored by a given experiment.
struct SweepSpec {
  SweepVariable variable = SweepVariable::d_samples;
  std::vector<double> values;

  SpectrumConfig spectrum;
  NoiseConfig noise;
  LossParams loss;  // k1/k2 feed the target; the rest feeds theory columns
  HorizonMapping mapping;

  // Fixed values of the non-swept knobs.
  std::int64_t d_samples = 1024;  // D
  std::int64_t n_regions = 1;    // N
  int d_visible = 1;             // d (also the NN/OLS ambient dimension)
  int d_eff = 0;                 // downsample projection width (0: = d_visible)
  int horizon = 0;

  int d_out = 1;
  int cells_per_axis = 2;
  int queries = 128;
  int trials = 8;
  std::uint64_t seed = 0;
  int threads = 1;
  NnDistribution nn_distribution = NnDistribution::latent;
};

struct ExperimentPoint {
  double x = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  double theory = 0.0;
};

struct ExperimentReport {
  std::string experiment;
  SweepVariable variable = SweepVariable::d_samples;
  std::vector<ExperimentPoint> points;  // primary metric
  std::string metric;                   // what `mean` measures
  // Secondary per-point metric (NN reports both mean squared error and mean
  // squared NN distance); empty when unused.
  std::string secondary_metric;
  std::vector<double> secondary_mean;

  double fitted_exponent = 0.0;  // log-log slope of the primary metric (NaN if n/a)
  double theory_exponent = 0.0;  // NaN when no exponent is predicted
  double fit_r_squared = 0.0;
  double argmin_x = 0.0;         // sweep value minimizing the mean (NaN if n/a)
  int trials = 0;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;
  std::string notes;
};

// Memorization oracle. Sweep variable must be D. For each D: draw D training
// points and `queries` fresh queries, predict each query's target by its
// nearest neighbor's under a k1-Lipschitz linear F. Primary metric: mean
// squared NN distance (slope target -2/d); secondary: mean squared error.
ExperimentReport nn_risk_experiment(const SweepSpec& spec);

// Grid-quantizer oracle: uniform samples on [0,1]^d quantized to the centers
// of a cells_per_axis^d grid; estimates E||x - Q(x)||^4 per N. Slope target
// -4/d; the theory column is the exact h^4 (d/80 + d(d-1)/144).
ExperimentReport quantizer_distortion_experiment(
    int d, const std::vector<std::int64_t>& cells_per_axis,
    std::int64_t samples, int trials, std::uint64_t seed, int threads = 1);

// Piecewise-linear learner: equal-probability axis grid over the top-d'
// coordinates (d' = min(d, round(ln N / ln cells_per_axis))), per-cell OLS on
// all d visible coordinates (cell mean below 2(d+1) samples), fresh test set.
// Sweeps d, N, or D; reports test MSE and the argmin over the sweep.
ExperimentReport pwl_learner_experiment(const SweepSpec& spec);

// Dimension-truncation sweep: identical learner but seeing only the top-d_eff
// coordinates; sweep variable must be d_eff. Theory column: total_loss at
// d_eff from the sweep's LossParams.
ExperimentReport downsample_experiment(const SweepSpec& spec);

// Regression-noise oracle: single-cell OLS with Gaussian design, measuring
// excess risk at fresh queries against d * noise_var / D.
ExperimentReport ols_noise_term_experiment(int d,
                                           const std::vector<std::int64_t>& d_samples,
                                           double noise_var, int trials,
                                           std::uint64_t seed, int threads = 1,
                                           int queries = 256);

// JSON (full report) and CSV ("x,mean,stderr,theory") serializations.
std::string report_to_json(const ExperimentReport& report);
std::string report_to_csv(const ExperimentReport& report);

}  // namespace horizonlaw
