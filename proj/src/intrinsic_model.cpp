#include "horizonlaw/intrinsic_model.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "horizonlaw/csv.hpp"
#include "horizonlaw/rng.hpp"

namespace horizonlaw {

namespace {

bool finite(double v) { return std::isfinite(v); }

double spectral_norm(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

// Largest |eigenvalue| of a symmetric matrix.
double sym_norm(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

}  // namespace

void validate(const SpectrumConfig& cfg) {
  if (!finite(cfg.lambda0) || cfg.lambda0 <= 0.0)
    throw std::invalid_argument("spectrum.lambda0 must be positive");
  if (!finite(cfg.alpha_z) || cfg.alpha_z <= 1.0)
    throw std::invalid_argument("spectrum.alpha_z must exceed 1");
  if (cfg.d_total < 1)
    throw std::invalid_argument("spectrum.d_total must be at least 1");
}

void validate(const NoiseConfig& cfg) {
  if (!finite(cfg.eta) || cfg.eta < 0.0 || cfg.eta > 1.0)
    throw std::invalid_argument("noise.eta must lie in [0, 1]");
  if (!finite(cfg.sigma_m_sq) || cfg.sigma_m_sq < 0.0)
    throw std::invalid_argument("noise.sigma_m_sq must be non-negative");
  if (cfg.s_frames < 1) throw std::invalid_argument("noise.s_frames must be at least 1");
  if (cfg.d_i_s < 1) throw std::invalid_argument("noise.d_i_s must be at least 1");
}

void validate(const HorizonMapping& map) {
  if (!finite(map.c_d) || map.c_d <= 0.0)
    throw std::invalid_argument("mapping.c_d must be positive");
  if (map.d_total < 1)
    throw std::invalid_argument("mapping.d_total must be at least 1");
}

int d_of_horizon(const HorizonMapping& map, int horizon) {
  validate(map);
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  const double raw = map.c_d * static_cast<double>(horizon);
  long d = std::lround(raw);
  if (d < 1) d = 1;
  if (d > map.d_total) d = map.d_total;
  return static_cast<int>(d);
}

double eigenvalue(const SpectrumConfig& cfg, int i) {
  validate(cfg);
  if (i < 1 || i > cfg.d_total)
    throw std::out_of_range("eigenvalue index outside [1, d_total]");
  return cfg.lambda0 * std::pow(static_cast<double>(i), -cfg.alpha_z);
}

double tail_variance(const SpectrumConfig& cfg, int d, TailMode mode) {
  validate(cfg);
  if (d < 1 || d > cfg.d_total)
    throw std::out_of_range("tail_variance dimension outside [1, d_total]");
  if (mode == TailMode::approx) {
    if (cfg.alpha_z <= 1.0)
      throw std::domain_error("tail approximation diverges for alpha_z <= 1");
    return cfg.lambda0 /
           ((cfg.alpha_z - 1.0) * std::pow(static_cast<double>(d), cfg.alpha_z - 1.0));
  }
  // Smallest terms first to keep the partial sums accurate.
  double sum = 0.0;
  for (int i = cfg.d_total; i > d; --i)
    sum += std::pow(static_cast<double>(i), -cfg.alpha_z);
  return cfg.lambda0 * sum;
}

Eigen::MatrixXd sample_latent(const SpectrumConfig& cfg, std::int64_t count) {
  validate(cfg);
  if (count < 1) throw std::invalid_argument("sample count must be at least 1");
  Eigen::VectorXd scale(cfg.d_total);
  for (int i = 0; i < cfg.d_total; ++i)
    scale(i) = std::sqrt(cfg.lambda0 * std::pow(static_cast<double>(i + 1), -cfg.alpha_z));
  Rng rng(derive_seed(cfg.seed, "latent"));
  Eigen::MatrixXd out(count, cfg.d_total);
  for (std::int64_t r = 0; r < count; ++r)
    for (int c = 0; c < cfg.d_total; ++c) out(r, c) = scale(c) * rng.normal();
  return out;
}

Eigen::MatrixXd truncate(const Eigen::MatrixXd& rows, int d_visible) {
  if (d_visible < 1 || d_visible > rows.cols())
    throw std::out_of_range("d_visible outside [1, row width]");
  return rows.leftCols(d_visible);
}

Eigen::VectorXd truncate(const Eigen::VectorXd& row, int d_visible) {
  if (d_visible < 1 || d_visible > row.size())
    throw std::out_of_range("d_visible outside [1, row width]");
  return row.head(d_visible);
}

Eigen::VectorXd TargetFunction::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != linear.cols())
    throw std::invalid_argument("target input width mismatch");
  Eigen::VectorXd y = linear * x;
  for (std::size_t j = 0; j < quadratic.size(); ++j)
    y(static_cast<Eigen::Index>(j)) += 0.5 * x.dot(quadratic[j] * x);
  return y;
}

Eigen::MatrixXd TargetFunction::apply_rows(const Eigen::MatrixXd& rows) const {
  const int m = static_cast<int>(rows.cols());
  if (m < 1 || m > d_in())
    throw std::invalid_argument("target input width mismatch");
  Eigen::MatrixXd y = rows * linear.leftCols(m).transpose();
  for (std::size_t j = 0; j < quadratic.size(); ++j) {
    const Eigen::MatrixXd q = quadratic[j].topLeftCorner(m, m);
    // 0.5 * x^T Q x per row.
    y.col(static_cast<Eigen::Index>(j)) +=
        0.5 * ((rows * q).cwiseProduct(rows)).rowwise().sum();
  }
  return y;
}

TargetFunction make_target(const SpectrumConfig& cfg, double k1, double k2,
                           int d_out, std::uint64_t seed) {
  validate(cfg);
  if (!finite(k1) || k1 <= 0.0) throw std::invalid_argument("k1 must be positive");
  if (!finite(k2) || k2 < 0.0) throw std::invalid_argument("k2 must be non-negative");
  if (d_out < 1) throw std::invalid_argument("d_out must be at least 1");

  double total_var = 0.0;
  for (int i = 1; i <= cfg.d_total; ++i)
    total_var += cfg.lambda0 * std::pow(static_cast<double>(i), -cfg.alpha_z);
  // Gradient budget: the quadratic part contributes up to k2 * |x|, so the
  // linear norm is k1 - k2 * R over a 6-sigma sampling radius R.
  const double radius = 6.0 * std::sqrt(total_var);
  const double linear_norm = k1 - k2 * radius;
  if (linear_norm <= 0.0)
    throw construction_error(
        "Lipschitz budget infeasible: k2 * sampling radius exceeds k1");

  TargetFunction f;
  f.k1 = k1;
  f.k2 = k2;
  Rng lin_rng(derive_seed(seed, "target-linear"));
  f.linear.resize(d_out, cfg.d_total);
  for (int r = 0; r < d_out; ++r)
    for (int c = 0; c < cfg.d_total; ++c) f.linear(r, c) = lin_rng.normal();
  f.linear *= linear_norm / spectral_norm(f.linear);

  if (k2 > 0.0) {
    Rng quad_rng(derive_seed(seed, "target-quad"));
    f.quadratic.resize(d_out);
    double sq_sum = 0.0;
    for (int j = 0; j < d_out; ++j) {
      Eigen::MatrixXd g(cfg.d_total, cfg.d_total);
      for (int r = 0; r < cfg.d_total; ++r)
        for (int c = 0; c < cfg.d_total; ++c) g(r, c) = quad_rng.normal();
      f.quadratic[j] = 0.5 * (g + g.transpose());
      const double nrm = sym_norm(f.quadratic[j]);
      sq_sum += nrm * nrm;
    }
    const double factor = k2 / std::sqrt(sq_sum);
    for (auto& q : f.quadratic) q *= factor;
  }

  // Sampled Lipschitz check over the latent distribution.
  Rng check_rng(derive_seed(seed, "target-verify"));
  Eigen::VectorXd scale(cfg.d_total);
  for (int i = 0; i < cfg.d_total; ++i)
    scale(i) = std::sqrt(cfg.lambda0 * std::pow(static_cast<double>(i + 1), -cfg.alpha_z));
  const double bound = k1 * (1.0 + 1e-6);
  for (int pair = 0; pair < 512; ++pair) {
    Eigen::VectorXd x(cfg.d_total), y(cfg.d_total);
    for (int i = 0; i < cfg.d_total; ++i) x(i) = scale(i) * check_rng.normal();
    for (int i = 0; i < cfg.d_total; ++i) y(i) = scale(i) * check_rng.normal();
    const double dist = (x - y).norm();
    if (dist == 0.0) continue;
    if ((f(x) - f(y)).norm() / dist > bound)
      throw construction_error("sampled Lipschitz ratio exceeds k1 after rescaling");
  }
  return f;
}

SyntheticDataset generate_dataset(const SpectrumConfig& spectrum,
                                  const NoiseConfig& noise,
                                  const TargetFunction& target,
                                  const HorizonMapping& mapping,
                                  std::int64_t count, int horizon) {
  validate(spectrum);
  validate(noise);
  validate(mapping);
  if (count < 1) throw std::invalid_argument("dataset count must be at least 1");
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (target.d_in() != spectrum.d_total)
    throw std::invalid_argument("target input width must equal d_total");

  SyntheticDataset ds;
  ds.spectrum = spectrum;
  ds.noise = noise;
  ds.mapping = mapping;
  ds.horizon = horizon;
  ds.d_visible = d_of_horizon(mapping, horizon);
  ds.latent = sample_latent(spectrum, count);
  ds.inputs = ds.latent.leftCols(ds.d_visible);
  ds.targets = target.apply_rows(ds.latent);

  const int d_out = target.d_out();
  const double coord_sd = std::sqrt(noise.total_variance() / d_out);
  Rng rng(derive_seed(spectrum.seed, "dataset-noise"));
  for (std::int64_t r = 0; r < count; ++r) {
    if (rng.uniform() < noise.eta)
      for (int c = 0; c < d_out; ++c) ds.targets(r, c) += coord_sd * rng.normal();
  }
  return ds;
}

void write_csv(const SyntheticDataset& ds, const std::string& path) {
  std::vector<std::string> names;
  names.reserve(ds.inputs.cols() + ds.targets.cols());
  for (int i = 1; i <= ds.inputs.cols(); ++i) names.push_back("x_" + std::to_string(i));
  for (int i = 1; i <= ds.targets.cols(); ++i) names.push_back("y_" + std::to_string(i));
  Eigen::MatrixXd all(ds.inputs.rows(), ds.inputs.cols() + ds.targets.cols());
  all << ds.inputs, ds.targets;
  write_table(path, names, all);
}

}  // namespace horizonlaw
