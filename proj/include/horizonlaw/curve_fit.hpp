#pragma once

#include <span>
#include <string>
#include <vector>

namespace horizonlaw {

// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;  // NaN when n < 3
};

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

// Candidate scaling-curve families.
enum class CurveModel {
  power_offset,  // f : A + B x^-alpha
  pure_power,    // g1: A x^-alpha
  log_linear,    // g2: A + B ln x
  quadratic      // g3: A + B x + C x^2
};

const char* curve_model_name(CurveModel m);

struct ScalingFit {
  CurveModel model = CurveModel::power_offset;
  std::vector<double> params;  // f:{A,B,alpha} g1:{A,alpha} g2:{A,B} g3:{A,B,C}
  double rss = 0.0;
  int n_points = 0;
  int k_params = 0;  // f,g3: 3; g1,g2: 2
  double aic = 0.0;
  double bic = 0.0;
  bool skipped = false;
  std::string skip_reason;
  bool alpha_unidentifiable = false;  // alpha pinned at a bound or B ~ 0
};

struct FitOptions {
  double alpha_min = 0.01;
  double alpha_max = 4.0;
  int grid_points = 200;          // log-spaced alpha seeds
  double golden_rel_tol = 1e-6;   // golden-section refinement
};

// f = A + B x^-alpha: outer 1-D search on alpha (log grid + golden section),
// inner exact linear least squares for (A, B).
ScalingFit fit_power_offset(std::span<const double> xs,
                            std::span<const double> ys,
                            const FitOptions& opt = {});

// g1 (same outer/inner scheme, A-only inner solve; skipped with a reason when
// any y <= 0), then g2 and g3 by exact linear least squares.
std::vector<ScalingFit> fit_alternatives(std::span<const double> xs,
                                         std::span<const double> ys,
                                         const FitOptions& opt = {});

// Gaussian concentrated-likelihood criteria:
// aic = n ln(max(rss, 1e-300)/n) + 2k, bic = n ln(max(rss, 1e-300)/n) + k ln n.
void information_criteria(ScalingFit& fit);

// All four fits sorted by AIC ascending; ties by BIC, then fewer parameters.
// Skipped fits sort last.
std::vector<ScalingFit> compare_models(std::span<const double> xs,
                                       std::span<const double> ys,
                                       const FitOptions& opt = {});

}  // namespace horizonlaw
