#include "horizonlaw/estimator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "horizonlaw/curve_fit.hpp"
#include "horizonlaw/parallel.hpp"

namespace horizonlaw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::int64_t kBlockRows = 1024;

}  // namespace

Series load_series(const std::string& path, const CsvOptions& opt) {
  Table table = load_table(path, opt);
  if (table.values.rows() < 2)
    throw parse_error("series needs at least 2 rows, got " +
                      std::to_string(table.values.rows()));
  Series s;
  s.values = std::move(table.values);
  s.channel_names = std::move(table.column_names);
  s.source_path = path;
  return s;
}

WindowMatrix make_windows(const Series& series, const WindowOptions& opt) {
  const Eigen::Index t_len = series.values.rows();
  const Eigen::Index v_ch = series.values.cols();
  if (opt.window_len < 2) throw std::invalid_argument("window_len must be at least 2");
  if (opt.stride < 1) throw std::invalid_argument("stride must be at least 1");
  if (opt.window_len > t_len)
    throw std::invalid_argument("window_len exceeds the series length");
  if (v_ch < 1) throw std::invalid_argument("series has no channels");

  const Eigen::Index l_win = opt.window_len;
  const Eigen::Index offsets = (t_len - l_win) / opt.stride + 1;
  const Eigen::Index row_len = opt.channel_independent ? l_win : v_ch * l_win;
  const Eigen::Index n_rows = opt.channel_independent ? v_ch * offsets : offsets;

  WindowMatrix wm;
  wm.window_len = opt.window_len;
  wm.stride = opt.stride;
  wm.rows.resize(n_rows, row_len);
  wm.row_means.resize(n_rows);
  wm.row_stds.resize(n_rows);
  wm.constant_flags.assign(static_cast<std::size_t>(n_rows), 0);

  for (Eigen::Index r = 0; r < n_rows; ++r) {
    if (opt.channel_independent) {
      // Channel-major: rows [v * offsets, (v+1) * offsets) hold channel v.
      const Eigen::Index v = r / offsets;
      const Eigen::Index start = (r % offsets) * opt.stride;
      wm.rows.row(r) = series.values.col(v).segment(start, l_win).transpose();
    } else {
      // One row per offset: channel blocks [v*L, (v+1)*L) side by side.
      const Eigen::Index start = r * opt.stride;
      for (Eigen::Index v = 0; v < v_ch; ++v)
        wm.rows.row(r).segment(v * l_win, l_win) =
            series.values.col(v).segment(start, l_win).transpose();
    }
    const double mean = wm.rows.row(r).mean();
    const double var = (wm.rows.row(r).array() - mean).square().mean();
    const double sd = std::sqrt(var);
    wm.row_means(r) = mean;
    wm.row_stds(r) = sd;
    if (sd < opt.eps) wm.constant_flags[static_cast<std::size_t>(r)] = 1;
    if (opt.normalize)
      wm.rows.row(r) = (wm.rows.row(r).array() - mean) / std::max(sd, opt.eps);
  }
  return wm;
}

Eigen::VectorXd pca_spectrum(const Eigen::MatrixXd& rows, int threads) {
  const Eigen::Index w = rows.rows();
  const Eigen::Index l = rows.cols();
  if (w < 2) throw std::invalid_argument("pca_spectrum needs at least 2 rows");
  if (l < 1) throw std::invalid_argument("pca_spectrum needs at least 1 column");

  const std::int64_t blocks = (w + kBlockRows - 1) / kBlockRows;
  const auto block_range = [&](std::int64_t b) {
    const Eigen::Index lo = static_cast<Eigen::Index>(b * kBlockRows);
    const Eigen::Index hi = std::min<Eigen::Index>(lo + kBlockRows, w);
    return std::pair<Eigen::Index, Eigen::Index>{lo, hi};
  };

  // Per-block partials reduced in block order make the arithmetic identical
  // for every worker count. Fall back to a serial loop (same block order,
  // same sums) when the partial buffers would be large.
  const bool parallel_ok =
      resolve_threads(threads) > 1 &&
      blocks * static_cast<std::int64_t>(l) * l <= (std::int64_t{1} << 23);

  Eigen::VectorXd mean(l);
  {
    std::vector<Eigen::VectorXd> partial(static_cast<std::size_t>(blocks));
    const auto sum_block = [&](std::int64_t b) {
      const auto [lo, hi] = block_range(b);
      partial[static_cast<std::size_t>(b)] =
          rows.middleRows(lo, hi - lo).colwise().sum().transpose();
    };
    if (parallel_ok)
      parallel_for(blocks, threads, sum_block);
    else
      for (std::int64_t b = 0; b < blocks; ++b) sum_block(b);
    mean.setZero();
    for (const auto& p : partial) mean += p;
    mean /= static_cast<double>(w);
  }

  Eigen::MatrixXd cov(l, l);
  if (parallel_ok) {
    std::vector<Eigen::MatrixXd> partial(static_cast<std::size_t>(blocks));
    parallel_for(blocks, threads, [&](std::int64_t b) {
      const auto [lo, hi] = block_range(b);
      const Eigen::MatrixXd centered =
          rows.middleRows(lo, hi - lo).rowwise() - mean.transpose();
      partial[static_cast<std::size_t>(b)] = centered.transpose() * centered;
    });
    cov.setZero();
    for (const auto& p : partial) cov += p;
  } else {
    cov.setZero();
    Eigen::MatrixXd scratch;
    for (std::int64_t b = 0; b < blocks; ++b) {
      const auto [lo, hi] = block_range(b);
      const Eigen::MatrixXd centered =
          rows.middleRows(lo, hi - lo).rowwise() - mean.transpose();
      scratch = centered.transpose() * centered;
      cov += scratch;
    }
  }
  cov /= static_cast<double>(w - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues().reverse();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::max(ev(i), 0.0);
  return ev;
}

SpectrumEstimate fit_zipf(const Eigen::VectorXd& eigenvalues,
                          const ZipfFitOptions& opt) {
  const int n = static_cast<int>(eigenvalues.size());
  if (n < 1) throw std::invalid_argument("no eigenvalues");
  if (opt.i_min < 1) throw std::invalid_argument("i_min must be at least 1");
  if (!(eigenvalues(0) > 0.0))
    throw std::domain_error("leading eigenvalue must be positive");

  int i_max;
  if (opt.i_max > 0) {
    i_max = std::min(opt.i_max, n);
  } else {
    // Noise floor: truncate where the spectrum falls below ratio * lambda_1.
    i_max = 0;
    const double floor_val = opt.floor_ratio * eigenvalues(0);
    while (i_max < n && eigenvalues(i_max) >= floor_val) ++i_max;
  }
  const int count = i_max - opt.i_min + 1;
  if (count < 3)
    throw std::invalid_argument("fit range [" + std::to_string(opt.i_min) + ", " +
                                std::to_string(i_max) + "] has fewer than 3 points");

  SpectrumEstimate est;
  est.eigenvalues = eigenvalues;
  est.fit_i_min = opt.i_min;
  est.fit_i_max = i_max;

  std::vector<double> log_i(static_cast<std::size_t>(count));
  std::vector<double> log_l(static_cast<std::size_t>(count));
  double lmin = std::numeric_limits<double>::infinity(), lmax = 0.0;
  for (int k = 0; k < count; ++k) {
    const int i = opt.i_min + k;
    const double lam = eigenvalues(i - 1);
    if (!(lam > 0.0))
      throw std::domain_error("non-positive eigenvalue at index " +
                              std::to_string(i) + "; shrink the fit range");
    log_i[static_cast<std::size_t>(k)] = std::log(static_cast<double>(i));
    log_l[static_cast<std::size_t>(k)] = std::log(lam);
    lmin = std::min(lmin, lam);
    lmax = std::max(lmax, lam);
  }

  if (lmax - lmin <= 1e-12 * lmax) {
    // Exactly flat: the log-log regression is degenerate (zero variance).
    est.flat_spectrum = true;
    est.alpha_z_hat = 0.0;
    est.lambda0_hat = lmax;
    est.r_squared = kNaN;
    est.slope_stderr = kNaN;
    return est;
  }

  const LinearFit fit = linear_fit(log_i, log_l);
  est.alpha_z_hat = -fit.slope;
  est.lambda0_hat = std::exp(fit.intercept);
  est.r_squared = fit.r_squared;
  est.slope_stderr = fit.slope_stderr;
  est.flat_spectrum = std::abs(est.alpha_z_hat) < opt.flat_alpha_threshold;
  return est;
}

int intrinsic_dim_estimate(const Eigen::VectorXd& eigenvalues, double energy) {
  if (!(energy > 0.0) || !(energy < 1.0))
    throw std::invalid_argument("energy must lie in (0, 1)");
  if (eigenvalues.size() < 1) throw std::invalid_argument("no eigenvalues");
  double total = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    total += std::max(eigenvalues(i), 0.0);
  if (!(total > 0.0)) throw std::domain_error("spectrum has no positive mass");
  double cum = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    cum += std::max(eigenvalues(i), 0.0);
    if (cum >= energy * total) return static_cast<int>(i + 1);
  }
  return static_cast<int>(eigenvalues.size());
}

}  // namespace horizonlaw
