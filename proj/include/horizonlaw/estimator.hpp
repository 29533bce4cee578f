#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "horizonlaw/csv.hpp"

namespace horizonlaw {

// Raw multivariate series, one column per channel.
struct Series {
  Eigen::MatrixXd values;  // T x V
  std::vector<std::string> channel_names;
  std::string source_path;
};

// Gap handling per CsvOptions; T >= 2 enforced.
Series load_series(const std::string& path, const CsvOptions& opt = {});

struct WindowOptions {
  int window_len = 2;
  int stride = 1;
  bool channel_independent = true;  // one row per channel per offset
  bool normalize = true;            // instance normalization (test hook when off)
  double eps = 1e-8;                // std floor for constant windows
};

struct WindowMatrix {
  Eigen::MatrixXd rows;             // W x L
  Eigen::VectorXd row_means;        // pre-normalization
  Eigen::VectorXd row_stds;         // population std before the eps floor
  std::vector<std::uint8_t> constant_flags;
  int window_len = 0;
  int stride = 1;
};

// Channel-independent mode yields V * floor((T - L)/stride + 1) rows. Each row
// is normalized by its mean and population std (eps floor for constant rows).
WindowMatrix make_windows(const Series& series, const WindowOptions& opt);

// Eigenvalues of the L x L sample covariance (Bessel 1/(W-1)) of the rows,
// sorted descending; negatives from roundoff are clamped to 0. Requires W >= 2.
// Accumulation uses fixed 1024-row blocks so results do not depend on the
// worker count.
Eigen::VectorXd pca_spectrum(const Eigen::MatrixXd& rows, int threads = 1);

struct ZipfFitOptions {
  int i_min = 2;             // default drops the off-law head point
  int i_max = 0;             // 0: truncate at the noise floor
  double floor_ratio = 1e-10;  // noise floor: lambda_i < ratio * lambda_1
  double flat_alpha_threshold = 0.05;
};

struct SpectrumEstimate {
  Eigen::VectorXd eigenvalues;  // descending
  double lambda0_hat = 0.0;
  double alpha_z_hat = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
  int fit_i_min = 0;  // 1-based inclusive range actually used
  int fit_i_max = 0;
  bool flat_spectrum = false;
};

// OLS of log lambda_i on log i over the fit range; lambda0_hat =
// exp(intercept), alpha_z_hat = -slope. Non-positive eigenvalues inside the
// range raise std::domain_error (shrink the range); a decay below
// flat_alpha_threshold sets flat_spectrum instead of failing.
SpectrumEstimate fit_zipf(const Eigen::VectorXd& eigenvalues,
                          const ZipfFitOptions& opt = {});

// Smallest d with sum_{i<=d} lambda_i >= energy * sum lambda_i.
int intrinsic_dim_estimate(const Eigen::VectorXd& eigenvalues, double energy);

}  // namespace horizonlaw
