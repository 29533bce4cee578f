#include "horizonlaw/loss_model.hpp"

#include <cmath>
#include <stdexcept>

#include "horizonlaw/rng.hpp"

namespace horizonlaw {

namespace {

void check_common(const LossParams& p) {
  if (!std::isfinite(p.k1) || p.k1 <= 0.0) throw std::domain_error("k1 must be positive");
  if (!std::isfinite(p.k2) || p.k2 < 0.0)
    throw std::domain_error("k2 must be non-negative");
  if (!std::isfinite(p.eta) || p.eta < 0.0 || p.eta > 1.0)
    throw std::domain_error("eta must lie in [0, 1]");
  if (!std::isfinite(p.lambda0) || p.lambda0 <= 0.0)
    throw std::domain_error("lambda0 must be positive");
  if (!std::isfinite(p.noise_total) || p.noise_total < 0.0)
    throw std::domain_error("noise_total must be non-negative");
}

void check_dim(double d) {
  if (!std::isfinite(d) || d < 1.0) throw std::domain_error("d must be at least 1");
}

// lambda0 / ((alpha_z - 1) d^(alpha_z - 1)), the variance past dimension d.
double tail_integral(const LossParams& p, double d) {
  if (!std::isfinite(p.alpha_z) || p.alpha_z <= 1.0)
    throw std::domain_error("alpha_z must exceed 1 for the spectrum tail");
  return p.lambda0 / ((p.alpha_z - 1.0) * std::pow(d, p.alpha_z - 1.0));
}

}  // namespace

double bayesian_loss(const LossParams& p, double d) {
  check_common(p);
  check_dim(d);
  return p.k1 * p.k1 * (1.0 - p.eta) * tail_integral(p, d) + p.eta * p.noise_total;
}

double approx_loss_dense(const LossParams& p, double d, double n_regions,
                         double d_samples, bool drop_tail_term) {
  check_common(p);
  check_dim(d);
  if (!std::isfinite(n_regions) || n_regions < 1.0)
    throw std::domain_error("n_regions must be at least 1");
  if (!std::isfinite(d_samples) || d_samples < 1.0)
    throw std::domain_error("d_samples must be at least 1");
  const double grid =
      p.k2 * p.k2 * d * d * std::pow(n_regions, -4.0 / d) / (4.0 * kPi * kPi);
  double per_region = p.noise_total;
  if (!drop_tail_term) per_region += p.k1 * p.k1 * tail_integral(p, d);
  return grid + (n_regions * d / d_samples) * per_region;
}

double approx_loss_scarce(const LossParams& p, double d, double d_samples) {
  check_common(p);
  check_dim(d);
  if (!std::isfinite(d_samples) || d_samples < 2.0)
    throw std::domain_error("d_samples must be at least 2");
  return (p.k1 * p.k1 / (4.0 * kPi)) * d * std::pow(d_samples, -2.0 / d);
}

double approx_loss_optimal_partition(const LossParams& p, double d,
                                     double n_regions) {
  check_common(p);
  if (!std::isfinite(p.alpha_z) || p.alpha_z < 1.0)
    throw std::domain_error("alpha_z must be at least 1 for the optimal partition");
  check_dim(d);
  if (!std::isfinite(n_regions) || n_regions < 1.0)
    throw std::domain_error("n_regions must be at least 1");
  return p.k2 * p.k2 * p.lambda0 * p.lambda0 * std::pow(n_regions, -4.0 / d) *
         std::exp(-2.0) / std::pow(d, 2.0 * p.alpha_z - 2.0);
}

RegimeDecision classify_regime(double d_samples, double n_regions, double horizon,
                               double threshold) {
  if (!std::isfinite(d_samples) || d_samples < 1.0)
    throw std::invalid_argument("d_samples must be at least 1");
  if (!std::isfinite(n_regions) || n_regions < 1.0)
    throw std::invalid_argument("n_regions must be at least 1");
  if (!std::isfinite(horizon) || horizon < 1.0)
    throw std::invalid_argument("horizon must be at least 1");
  if (!std::isfinite(threshold) || threshold <= 0.0)
    throw std::invalid_argument("threshold must be positive");
  RegimeDecision out;
  out.xi = d_samples / (n_regions * horizon);
  out.regime = out.xi >= threshold ? Regime::dense : Regime::scarce;
  return out;
}

double total_loss(const LossParams& p, double d, double n_regions,
                  double d_samples, RegimeMode mode, double horizon,
                  double threshold, bool drop_tail_term) {
  Regime regime;
  switch (mode) {
    case RegimeMode::dense:
      regime = Regime::dense;
      break;
    case RegimeMode::scarce:
      regime = Regime::scarce;
      break;
    case RegimeMode::automatic:
      if (!std::isfinite(horizon) || horizon < 1.0)
        throw std::invalid_argument(
            "automatic regime selection needs a horizon of at least 1");
      regime = classify_regime(d_samples, n_regions, horizon, threshold).regime;
      break;
    default:
      throw std::invalid_argument("unknown regime mode");
  }
  const double bayes = bayesian_loss(p, d);
  if (regime == Regime::dense)
    return bayes + approx_loss_dense(p, d, n_regions, d_samples, drop_tail_term);
  return bayes + approx_loss_scarce(p, d, d_samples);
}

}  // namespace horizonlaw
