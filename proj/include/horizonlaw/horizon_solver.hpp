#pragma once

#include "horizonlaw/intrinsic_model.hpp"
#include "horizonlaw/loss_model.hpp"

namespace horizonlaw {

enum class SolverMethod { small_model, large_model, scarce, numeric };

// Two readings of the scarce-data constant: the positive root of
// (alpha_z-1) beta^2 + beta - 2/C' = 0 (primary), and the simpler
// 2/(alpha_z+1) prefactor variant.
enum class ScarceForm { quadratic_root, simple };

struct OptimalResult {
  double d_star = 0.0;  // real-valued optimum
  int d_star_int = 1;   // the better of floor/ceil under the method's objective
  int h_star = -1;      // filled by optimal_horizon; -1 until then
  Regime regime_used = Regime::dense;
  SolverMethod method = SolverMethod::numeric;
  // Small-model diagnostic values: the raw Lambert-W factor W(arg) and the
  // W(x) ~= x approximation branch (arg itself). NaN for other methods.
  double lambert_value = 0.0;
  double lambert_approx = 0.0;
  bool saturated = false;  // set by optimal_horizon when d_star_int exceeds the cap
};

// Principal branch, x >= -1/e. Halley iteration; |W e^W - x| converges below
// max(1e-12, 1e-12 |x|).
double lambert_w(double x);

// Small-model regime (quantization vs tail). Solves the stationarity
// condition d^alpha = C0 N^(4/d) / ln N, C0 = k1^2 pi^2 (1-eta) lambda0 / k2^2,
// via u e^u = arg with u = 4 ln N / (alpha_z d):
//   d_star = 4 ln N / (alpha_z W(arg)),
//   arg    = (4 / (alpha_z C0^(1/alpha_z))) ln^(1+1/alpha_z) N.
// lambert_value = W(arg) and lambert_approx = arg are reported for
// comparison with the published closed form.
OptimalResult optimal_d_small_model(const LossParams& p, double n_regions);

// Large-model regime (tail vs noise amplification):
//   d_star = (k1^2 (1-eta) lambda0 D / (N noise_total))^(1/alpha_z).
OptimalResult optimal_d_large_model(const LossParams& p, double n_regions,
                                    double d_samples);

// Scarce regime: d_star = beta C^(1/(alpha_z-1)) ln D / ln ln D with
// C = 4 pi (1-eta) lambda0. ScarceForm::quadratic_root uses
// beta = (-1 + sqrt(1 + 8 (alpha_z-1)/C^(1/(alpha_z-1)))) / (2 (alpha_z-1));
// ScarceForm::simple replaces beta C^(1/(alpha_z-1)) by 2/(alpha_z+1).
OptimalResult optimal_d_scarce(const LossParams& p, double d_samples,
                               ScarceForm form = ScarceForm::quadratic_root);

// Exhaustive integer argmin of total_loss over [d_min, d_max]; ties go to the
// smaller d.
OptimalResult optimal_d_numeric(const LossParams& p, double n_regions,
                                double d_samples, Regime regime, int d_min,
                                int d_max, bool drop_tail_term = false);

struct HorizonResult {
  int h_star = 1;
  bool saturated = false;
};

// Smallest H with d_of_horizon(map, H) >= d_star_int. When d_star_int exceeds
// map.d_total the result saturates at the cap and is flagged.
HorizonResult optimal_horizon(const HorizonMapping& map, int d_star_int);

// Convenience: fills result.h_star / result.saturated in place.
void attach_horizon(const HorizonMapping& map, OptimalResult& result);

}  // namespace horizonlaw
