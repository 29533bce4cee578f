#include "horizonlaw/horizon_solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "horizonlaw/rng.hpp"

namespace horizonlaw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double tail_term(const LossParams& p, double d) {
  return p.k1 * p.k1 * (1.0 - p.eta) * p.lambda0 /
         ((p.alpha_z - 1.0) * std::pow(d, p.alpha_z - 1.0));
}

// Per-method objectives used only to pick the better of floor/ceil.
double obj_small(const LossParams& p, double n, double d) {
  return p.k2 * p.k2 * d * d * std::pow(n, -4.0 / d) / (4.0 * kPi * kPi) +
         tail_term(p, d);
}

double obj_large(const LossParams& p, double n, double big_d, double d) {
  return tail_term(p, d) + (n * d / big_d) * p.noise_total;
}

double obj_scarce(const LossParams& p, double big_d, double d) {
  return tail_term(p, d) + (p.k1 * p.k1 / (4.0 * kPi)) * d * std::pow(big_d, -2.0 / d);
}

template <typename Obj>
int better_int(double d_star, Obj&& obj) {
  double fl = std::floor(d_star);
  if (fl < 1.0) fl = 1.0;
  double ce = std::ceil(d_star);
  if (ce < 1.0) ce = 1.0;
  constexpr double cap = 1e15;
  if (fl > cap) fl = cap;
  if (ce > cap) ce = cap;
  if (ce > fl && obj(ce) < obj(fl)) return static_cast<int>(std::min(ce, 2.1e9));
  return static_cast<int>(std::min(fl, 2.1e9));
}

void check_params(const LossParams& p) {
  if (!std::isfinite(p.k1) || p.k1 <= 0.0) throw std::domain_error("k1 must be positive");
  if (!std::isfinite(p.k2) || p.k2 < 0.0)
    throw std::domain_error("k2 must be non-negative");
  if (!std::isfinite(p.eta) || p.eta < 0.0 || p.eta > 1.0)
    throw std::domain_error("eta must lie in [0, 1]");
  if (!std::isfinite(p.lambda0) || p.lambda0 <= 0.0)
    throw std::domain_error("lambda0 must be positive");
  if (!std::isfinite(p.alpha_z) || p.alpha_z <= 1.0)
    throw std::domain_error("alpha_z must exceed 1");
  if (!std::isfinite(p.noise_total) || p.noise_total < 0.0)
    throw std::domain_error("noise_total must be non-negative");
}

}  // namespace

double lambert_w(double x) {
  if (!std::isfinite(x)) throw std::domain_error("lambert_w needs a finite argument");
  const double branch = -std::exp(-1.0);
  if (x < branch) {
    if (x > branch * (1.0 + 1e-12))
      x = branch;  // round-off below the branch point
    else
      throw std::domain_error("lambert_w defined only for x >= -1/e");
  }
  if (x == 0.0) return 0.0;

  double w;
  if (x < -0.25) {
    // Series around the branch point w = -1.
    const double pterm = std::sqrt(2.0 * (1.0 + std::exp(1.0) * x));
    w = -1.0 + pterm - pterm * pterm / 3.0 + 11.0 * pterm * pterm * pterm / 72.0;
  } else if (x < std::exp(1.0)) {
    w = x / (1.0 + x);
  } else {
    const double lx = std::log(x);
    w = lx - std::log(lx);
  }

  const double tol = std::max(1e-13, 1e-13 * std::abs(x));
  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (std::abs(f) <= tol) return w;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (!std::isfinite(denom) || denom == 0.0) break;
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) return w;
  }
  // Fallback: bisection on the increasing branch.
  double lo = -1.0, hi = std::max(1.0, w + 1.0);
  while (hi * std::exp(hi) < x) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::exp(mid) < x ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

OptimalResult optimal_d_small_model(const LossParams& p, double n_regions) {
  check_params(p);
  if (!(n_regions >= 2.0)) throw std::domain_error("n_regions must be at least 2");
  if (p.k2 <= 0.0) throw std::domain_error("small-model optimum needs k2 > 0");
  if (p.eta >= 1.0)
    throw std::domain_error("small-model optimum needs eta < 1 (tail term vanishes)");

  const double c0 = p.k1 * p.k1 * kPi * kPi * (1.0 - p.eta) * p.lambda0 / (p.k2 * p.k2);
  const double ln_n = std::log(n_regions);
  const double arg = (4.0 / (p.alpha_z * std::pow(c0, 1.0 / p.alpha_z))) *
                     std::pow(ln_n, 1.0 + 1.0 / p.alpha_z);
  const double w = lambert_w(arg);

  OptimalResult res;
  res.method = SolverMethod::small_model;
  res.regime_used = Regime::dense;
  res.lambert_value = w;
  res.lambert_approx = arg;
  res.d_star = 4.0 * ln_n / (p.alpha_z * w);
  res.d_star_int =
      better_int(res.d_star, [&](double d) { return obj_small(p, n_regions, d); });
  return res;
}

OptimalResult optimal_d_large_model(const LossParams& p, double n_regions,
                                    double d_samples) {
  check_params(p);
  if (!(n_regions >= 1.0)) throw std::domain_error("n_regions must be at least 1");
  if (!(d_samples >= 1.0)) throw std::domain_error("d_samples must be at least 1");
  if (p.noise_total <= 0.0)
    throw std::domain_error("large-model optimum needs noise_total > 0");

  OptimalResult res;
  res.method = SolverMethod::large_model;
  res.regime_used = Regime::dense;
  res.lambert_value = kNaN;
  res.lambert_approx = kNaN;
  res.d_star = std::pow(p.k1 * p.k1 * (1.0 - p.eta) * p.lambda0 * d_samples /
                            (n_regions * p.noise_total),
                        1.0 / p.alpha_z);
  res.d_star_int = better_int(
      res.d_star, [&](double d) { return obj_large(p, n_regions, d_samples, d); });
  return res;
}

OptimalResult optimal_d_scarce(const LossParams& p, double d_samples,
                               ScarceForm form) {
  check_params(p);
  if (!(d_samples >= 16.0)) throw std::domain_error("d_samples must be at least 16");

  const double ln_d = std::log(d_samples);
  const double lnln_d = std::log(ln_d);
  double prefactor;
  if (form == ScarceForm::simple) {
    prefactor = 2.0 / (p.alpha_z + 1.0);
  } else {
    if (p.eta >= 1.0)
      throw std::domain_error("scarce optimum needs eta < 1 (tail term vanishes)");
    const double c = 4.0 * kPi * (1.0 - p.eta) * p.lambda0;
    const double c_prime = std::pow(c, 1.0 / (p.alpha_z - 1.0));
    const double am1 = p.alpha_z - 1.0;
    const double beta = (-1.0 + std::sqrt(1.0 + 8.0 * am1 / c_prime)) / (2.0 * am1);
    prefactor = beta * c_prime;
  }

  OptimalResult res;
  res.method = SolverMethod::scarce;
  res.regime_used = Regime::scarce;
  res.lambert_value = kNaN;
  res.lambert_approx = kNaN;
  res.d_star = prefactor * ln_d / lnln_d;
  res.d_star_int =
      better_int(res.d_star, [&](double d) { return obj_scarce(p, d_samples, d); });
  return res;
}

OptimalResult optimal_d_numeric(const LossParams& p, double n_regions,
                                double d_samples, Regime regime, int d_min,
                                int d_max, bool drop_tail_term) {
  check_params(p);
  if (d_min < 1 || d_max < d_min)
    throw std::invalid_argument("need 1 <= d_min <= d_max");
  if (!(n_regions >= 1.0)) throw std::invalid_argument("n_regions must be at least 1");
  if (!(d_samples >= (regime == Regime::scarce ? 2.0 : 1.0)))
    throw std::invalid_argument("d_samples too small for the requested regime");

  const auto objective = [&](double d) {
    const double bayes = tail_term(p, d) + p.eta * p.noise_total;
    if (regime == Regime::scarce)
      return bayes +
             (p.k1 * p.k1 / (4.0 * kPi)) * d * std::pow(d_samples, -2.0 / d);
    double per_region = p.noise_total;
    if (!drop_tail_term)
      per_region += p.k1 * p.k1 * p.lambda0 /
                    ((p.alpha_z - 1.0) * std::pow(d, p.alpha_z - 1.0));
    return bayes +
           p.k2 * p.k2 * d * d * std::pow(n_regions, -4.0 / d) / (4.0 * kPi * kPi) +
           (n_regions * d / d_samples) * per_region;
  };

  OptimalResult res;
  res.method = SolverMethod::numeric;
  res.regime_used = regime;
  res.lambert_value = kNaN;
  res.lambert_approx = kNaN;
  int best = d_min;
  double best_val = objective(static_cast<double>(d_min));
  for (int d = d_min + 1; d <= d_max; ++d) {
    const double v = objective(static_cast<double>(d));
    if (v < best_val) {
      best_val = v;
      best = d;
    }
  }
  res.d_star = static_cast<double>(best);
  res.d_star_int = best;
  return res;
}

HorizonResult optimal_horizon(const HorizonMapping& map, int d_star_int) {
  validate(map);
  if (d_star_int < 1) throw std::invalid_argument("d_star_int must be at least 1");
  HorizonResult out;
  out.saturated = d_star_int > map.d_total;
  const int target = out.saturated ? map.d_total : d_star_int;
  // round(c_d H) >= target first holds near H = (target - 1/2) / c_d; scan a
  // small neighbourhood to absorb rounding.
  long h = std::lround(std::ceil((target - 0.5) / map.c_d));
  h = std::max(1L, h - 2);
  while (d_of_horizon(map, static_cast<int>(h)) < target) ++h;
  out.h_star = static_cast<int>(h);
  return out;
}

void attach_horizon(const HorizonMapping& map, OptimalResult& result) {
  const HorizonResult h = optimal_horizon(map, result.d_star_int);
  result.h_star = h.h_star;
  result.saturated = h.saturated;
}

}  // namespace horizonlaw
