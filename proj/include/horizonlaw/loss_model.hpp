#pragma once

namespace horizonlaw {

// Every constant appearing in a closed-form loss expression.
struct LossParams {
  double k1 = 1.0;          // first-order Lipschitz constant of the target
  double k2 = 0.0;          // second-order Lipschitz constant
  double eta = 0.0;         // intrinsic noise ratio in [0, 1]
  double lambda0 = 1.0;     // leading eigenvalue
  double alpha_z = 1.5;     // Zip-f decay exponent (> 1 where a tail is summed)
  double noise_total = 0.0; // sigma_M^2 S^2 d_I(S) as one number
};

enum class Regime { dense, scarce };
enum class RegimeMode { automatic, dense, scarce };

struct RegimeDecision {
  Regime regime;
  double xi;  // order parameter D / (N * H)
};

// Irreducible loss: k1^2 (1-eta) lambda0 / ((alpha_z-1) d^(alpha_z-1)) + eta * noise_total.
// Strictly decreasing in d toward the noise floor.
double bayesian_loss(const LossParams& p, double d);

// Dense-regime excess loss: quantization + noise amplification,
// k2^2 d^2 N^(-4/d) / (4 pi^2) + (N d / D) (noise_total + k1^2 lambda0 / ((alpha_z-1) d^(alpha_z-1))).
// drop_tail_term removes the tail summand from the amplification factor (an
// N << D simplification); default keeps it.
double approx_loss_dense(const LossParams& p, double d, double n_regions,
                         double d_samples, bool drop_tail_term = false);

// Scarce-regime excess loss (nearest-neighbor memorization):
// (k1^2 / 4 pi) d D^(-2/d).
double approx_loss_scarce(const LossParams& p, double d, double d_samples);

// Quantization loss under the density-matched optimal partition:
// k2^2 lambda0^2 N^(-4/d) / (e^2 d^(2 alpha_z - 2)). No (alpha_z-1) pole, so
// alpha_z <= 1 is allowed here.
double approx_loss_optimal_partition(const LossParams& p, double d,
                                     double n_regions);

// xi = D / (N * H); dense iff xi >= threshold (boundary inclusive).
RegimeDecision classify_regime(double d_samples, double n_regions,
                               double horizon, double threshold = 1.0);

// bayesian_loss + the selected regime's approximation loss. horizon is only
// consulted for RegimeMode::automatic (std::invalid_argument when missing).
double total_loss(const LossParams& p, double d, double n_regions,
                  double d_samples, RegimeMode mode, double horizon = 0.0,
                  double threshold = 1.0, bool drop_tail_term = false);

}  // namespace horizonlaw
