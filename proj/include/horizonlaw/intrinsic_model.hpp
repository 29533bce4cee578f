#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace horizonlaw {

// Thrown when a sampled-and-rescaled construction cannot satisfy its
// advertised bounds (distinct from bad arguments and math-domain errors).
struct construction_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Zip-f covariance spectrum of the intrinsic space: lambda_i = lambda0 * i^-alpha_z.
struct SpectrumConfig {
  double lambda0 = 1.0;
  double alpha_z = 1.5;
  int d_total = 1;
  std::uint64_t seed = 0;
};

void validate(const SpectrumConfig& cfg);  // throws std::invalid_argument

// Intrinsic observation noise. Only the aggregate variance
// sigma_m_sq * s_frames^2 * d_i_s enters the loss formulas.
struct NoiseConfig {
  double eta = 0.0;        // probability a sample's target is perturbed
  double sigma_m_sq = 0.0; // per-frame per-dimension noise variance
  int s_frames = 1;        // prediction length S
  int d_i_s = 1;           // intrinsic dimension of the prediction window

  double total_variance() const {
    return sigma_m_sq * static_cast<double>(s_frames) * s_frames * d_i_s;
  }
};

void validate(const NoiseConfig& cfg);

// Linear horizon -> intrinsic-dimension mapping with a hard cap.
struct HorizonMapping {
  double c_d = 1.0;  // dimensions per frame
  int d_total = 1;
};

void validate(const HorizonMapping& map);

// d(H) = clamp(round(c_d * H), 1, d_total); monotone non-decreasing in H.
int d_of_horizon(const HorizonMapping& map, int horizon);

enum class TailMode { exact, approx };

// lambda0 * i^-alpha_z, 1-based. Throws std::out_of_range outside [1, d_total].
double eigenvalue(const SpectrumConfig& cfg, int i);

// exact: sum of lambda_i for i in (d, d_total]. approx: the integral form
// lambda0 / ((alpha_z - 1) * d^(alpha_z - 1)), which targets the untruncated tail.
double tail_variance(const SpectrumConfig& cfg, int d, TailMode mode);

// count x d_total rows, coordinate i ~ N(0, lambda_i), independent entries.
// Stream (cfg.seed, "latent"); identical output for identical (cfg, count).
Eigen::MatrixXd sample_latent(const SpectrumConfig& cfg, std::int64_t count);

// Coordinate projection onto the first d_visible (highest-variance) axes.
Eigen::MatrixXd truncate(const Eigen::MatrixXd& rows, int d_visible);
Eigen::VectorXd truncate(const Eigen::VectorXd& row, int d_visible);

// Ground-truth predictor: F_j(x) = A_j . x + 0.5 * x^T Q_j x with
// ||A||_2 <= k1 and sqrt(sum_j ||Q_j||_2^2) = k2 (exact Hessian bound).
struct TargetFunction {
  Eigen::MatrixXd linear;                  // d_out x d_in
  std::vector<Eigen::MatrixXd> quadratic;  // per-output symmetric d_in x d_in; empty when k2 == 0
  double k1 = 1.0;
  double k2 = 0.0;

  int d_in() const { return static_cast<int>(linear.cols()); }
  int d_out() const { return static_cast<int>(linear.rows()); }

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
  // Row-wise application; rows may carry fewer than d_in coordinates, in
  // which case the missing (truncated) coordinates are treated as 0.
  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& rows) const;
};

// Random target with sampled-check Lipschitz bounds. The linear part is
// rescaled to spectral norm k1 - k2 * R (R = 6 sigma radius of the latent) so
// the first-order bound holds over the sampled region; infeasible budgets
// throw construction_error. Deterministic given (cfg, seed).
TargetFunction make_target(const SpectrumConfig& cfg, double k1, double k2,
                           int d_out, std::uint64_t seed);

struct SyntheticDataset {
  Eigen::MatrixXd latent;   // count x d_total
  Eigen::MatrixXd inputs;   // count x d_visible (prefix of latent)
  Eigen::MatrixXd targets;  // count x d_out
  int d_visible = 0;
  int horizon = 0;
  SpectrumConfig spectrum;
  NoiseConfig noise;
  HorizonMapping mapping;
};

// targets = F(full latent), perturbed with probability eta by Gaussian noise
// whose total variance is noise.total_variance() (spread evenly over the
// output coordinates). Bit-reproducible from (configs, seed).
SyntheticDataset generate_dataset(const SpectrumConfig& spectrum,
                                  const NoiseConfig& noise,
                                  const TargetFunction& target,
                                  const HorizonMapping& mapping,
                                  std::int64_t count, int horizon);

// CSV export: header x_1..x_dvis,y_1..y_dout, >= 12 significant digits.
void write_csv(const SyntheticDataset& ds, const std::string& path);

}  // namespace horizonlaw
