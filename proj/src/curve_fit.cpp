#include "horizonlaw/curve_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace horizonlaw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_xy(std::span<const double> xs, std::span<const double> ys,
              std::size_t min_n) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("xs and ys must have the same length");
  if (xs.size() < min_n)
    throw std::invalid_argument("underdetermined: need at least " +
                                std::to_string(min_n) + " points, got " +
                                std::to_string(xs.size()));
  for (double v : xs)
    if (!std::isfinite(v)) throw std::invalid_argument("xs must be finite");
  for (double v : ys)
    if (!std::isfinite(v)) throw std::invalid_argument("ys must be finite");
}

void check_positive_x(std::span<const double> xs) {
  for (double v : xs)
    if (v <= 0.0) throw std::invalid_argument("xs must be positive");
}

double rss_of(std::span<const double> ys, const Eigen::MatrixXd& design,
              const Eigen::VectorXd& coef) {
  double rss = 0.0;
  for (Eigen::Index i = 0; i < design.rows(); ++i) {
    const double r = ys[static_cast<std::size_t>(i)] - design.row(i).dot(coef);
    rss += r * r;
  }
  return rss;
}

// Least squares for y ~ design * coef.
Eigen::VectorXd solve_ls(std::span<const double> ys, const Eigen::MatrixXd& design) {
  Eigen::VectorXd y(design.rows());
  for (Eigen::Index i = 0; i < design.rows(); ++i)
    y(i) = ys[static_cast<std::size_t>(i)];
  return design.colPivHouseholderQr().solve(y);
}

struct InnerFit {
  double a = 0.0;
  double b = 0.0;
  double rss = 0.0;
};

// Best (A, B) for y ~ A + B x^-alpha at fixed alpha.
InnerFit inner_offset(std::span<const double> xs, std::span<const double> ys,
                      double alpha) {
  const std::size_t n = xs.size();
  double sp = 0.0, spp = 0.0, sy = 0.0, syp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double phi = std::pow(xs[i], -alpha);
    sp += phi;
    spp += phi * phi;
    sy += ys[i];
    syp += ys[i] * phi;
  }
  const double nn = static_cast<double>(n);
  const double det = nn * spp - sp * sp;
  InnerFit fit;
  if (std::abs(det) <= 1e-14 * std::max(1.0, nn * spp)) {
    fit.a = sy / nn;
    fit.b = 0.0;
  } else {
    fit.a = (spp * sy - sp * syp) / det;
    fit.b = (nn * syp - sp * sy) / det;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - fit.a - fit.b * std::pow(xs[i], -alpha);
    fit.rss += r * r;
  }
  return fit;
}

// Best A for y ~ A x^-alpha at fixed alpha.
InnerFit inner_pure(std::span<const double> xs, std::span<const double> ys,
                    double alpha) {
  double spp = 0.0, syp = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double phi = std::pow(xs[i], -alpha);
    spp += phi * phi;
    syp += ys[i] * phi;
  }
  InnerFit fit;
  fit.a = spp > 0.0 ? syp / spp : 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - fit.a * std::pow(xs[i], -alpha);
    fit.rss += r * r;
  }
  return fit;
}

// Log-grid seed plus golden-section refinement of rss(alpha).
template <typename Rss>
double search_alpha(const FitOptions& opt, Rss&& rss) {
  if (!(opt.alpha_min > 0.0) || !(opt.alpha_max > opt.alpha_min))
    throw std::invalid_argument("need 0 < alpha_min < alpha_max");
  if (opt.grid_points < 3) throw std::invalid_argument("grid_points must be >= 3");

  const double llo = std::log(opt.alpha_min), lhi = std::log(opt.alpha_max);
  int best = 0;
  double best_rss = std::numeric_limits<double>::infinity();
  std::vector<double> grid(static_cast<std::size_t>(opt.grid_points));
  for (int i = 0; i < opt.grid_points; ++i) {
    grid[static_cast<std::size_t>(i)] =
        std::exp(llo + (lhi - llo) * i / (opt.grid_points - 1));
    const double v = rss(grid[static_cast<std::size_t>(i)]);
    if (v < best_rss) {
      best_rss = v;
      best = i;
    }
  }
  double lo = std::log(grid[static_cast<std::size_t>(std::max(0, best - 1))]);
  double hi = std::log(
      grid[static_cast<std::size_t>(std::min(opt.grid_points - 1, best + 1))]);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = rss(std::exp(c)), fd = rss(std::exp(d));
  while (hi - lo > opt.golden_rel_tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = rss(std::exp(c));
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = rss(std::exp(d));
    }
  }
  return std::exp(0.5 * (lo + hi));
}

bool alpha_at_bound(double alpha, const FitOptions& opt) {
  return alpha <= opt.alpha_min * 1.001 || alpha >= opt.alpha_max * 0.999;
}

}  // namespace

const char* curve_model_name(CurveModel m) {
  switch (m) {
    case CurveModel::power_offset: return "power_offset";
    case CurveModel::pure_power: return "pure_power";
    case CurveModel::log_linear: return "log_linear";
    case CurveModel::quadratic: return "quadratic";
  }
  return "unknown";
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
  check_xy(xs, ys, 2);
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("xs are all identical");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - fit.intercept - fit.slope * xs[i];
    rss += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - rss / syy : (rss <= 1e-24 ? 1.0 : 0.0);
  fit.slope_stderr =
      xs.size() >= 3 ? std::sqrt(rss / (n - 2.0) / sxx) : kNaN;
  return fit;
}

ScalingFit fit_power_offset(std::span<const double> xs,
                            std::span<const double> ys, const FitOptions& opt) {
  check_xy(xs, ys, 4);
  check_positive_x(xs);
  const double alpha =
      search_alpha(opt, [&](double a) { return inner_offset(xs, ys, a).rss; });
  const InnerFit inner = inner_offset(xs, ys, alpha);
  ScalingFit fit;
  fit.model = CurveModel::power_offset;
  fit.params = {inner.a, inner.b, alpha};
  fit.rss = inner.rss;
  fit.n_points = static_cast<int>(xs.size());
  fit.k_params = 3;
  fit.alpha_unidentifiable = alpha_at_bound(alpha, opt) ||
                             std::abs(inner.b) <= 1e-10 * std::max(1.0, std::abs(inner.a));
  return fit;
}

std::vector<ScalingFit> fit_alternatives(std::span<const double> xs,
                                         std::span<const double> ys,
                                         const FitOptions& opt) {
  check_xy(xs, ys, 4);
  check_positive_x(xs);
  std::vector<ScalingFit> fits;

  ScalingFit g1;
  g1.model = CurveModel::pure_power;
  g1.n_points = static_cast<int>(xs.size());
  g1.k_params = 2;
  if (std::any_of(ys.begin(), ys.end(), [](double y) { return y <= 0.0; })) {
    g1.skipped = true;
    g1.skip_reason = "pure power law needs positive values";
  } else {
    const double alpha =
        search_alpha(opt, [&](double a) { return inner_pure(xs, ys, a).rss; });
    const InnerFit inner = inner_pure(xs, ys, alpha);
    g1.params = {inner.a, alpha};
    g1.rss = inner.rss;
    g1.alpha_unidentifiable = alpha_at_bound(alpha, opt);
  }
  fits.push_back(std::move(g1));

  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  {
    ScalingFit g2;
    g2.model = CurveModel::log_linear;
    g2.n_points = static_cast<int>(xs.size());
    g2.k_params = 2;
    Eigen::MatrixXd design(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      design(i, 0) = 1.0;
      design(i, 1) = std::log(xs[static_cast<std::size_t>(i)]);
    }
    const Eigen::VectorXd coef = solve_ls(ys, design);
    g2.params = {coef(0), coef(1)};
    g2.rss = rss_of(ys, design, coef);
    fits.push_back(std::move(g2));
  }
  {
    ScalingFit g3;
    g3.model = CurveModel::quadratic;
    g3.n_points = static_cast<int>(xs.size());
    g3.k_params = 3;
    Eigen::MatrixXd design(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = xs[static_cast<std::size_t>(i)];
      design(i, 0) = 1.0;
      design(i, 1) = x;
      design(i, 2) = x * x;
    }
    const Eigen::VectorXd coef = solve_ls(ys, design);
    g3.params = {coef(0), coef(1), coef(2)};
    g3.rss = rss_of(ys, design, coef);
    fits.push_back(std::move(g3));
  }
  return fits;
}

void information_criteria(ScalingFit& fit) {
  if (fit.skipped) {
    fit.aic = kNaN;
    fit.bic = kNaN;
    return;
  }
  const double n = static_cast<double>(fit.n_points);
  const double avg = std::max(fit.rss, 1e-300) / n;
  fit.aic = n * std::log(avg) + 2.0 * fit.k_params;
  fit.bic = n * std::log(avg) + fit.k_params * std::log(n);
}

std::vector<ScalingFit> compare_models(std::span<const double> xs,
                                       std::span<const double> ys,
                                       const FitOptions& opt) {
  std::vector<ScalingFit> fits;
  fits.push_back(fit_power_offset(xs, ys, opt));
  for (auto& f : fit_alternatives(xs, ys, opt)) fits.push_back(std::move(f));
  for (auto& f : fits) information_criteria(f);
  std::stable_sort(fits.begin(), fits.end(),
                   [](const ScalingFit& a, const ScalingFit& b) {
                     if (a.skipped != b.skipped) return !a.skipped;
                     if (a.skipped) return false;
                     const double scale =
                         std::max({1.0, std::abs(a.aic), std::abs(b.aic)});
                     if (std::abs(a.aic - b.aic) > 1e-12 * scale)
                       return a.aic < b.aic;
                     if (std::abs(a.bic - b.bic) > 1e-12 * scale)
                       return a.bic < b.bic;
                     return a.k_params < b.k_params;
                   });
  return fits;
}

}  // namespace horizonlaw
