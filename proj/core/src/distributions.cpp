#include "lgmix/distributions.hpp"

#include <cmath>

#include "lgmix/errors.hpp"
#include "lgmix/special.hpp"

namespace lgmix {

double sample_std_normal(RngStream& rng) { return normal_quantile(rng.uniform()); }

double sample_truncated_normal(double mean, double sd, const Interval& interval,
                               RngStream& rng) {
  if (!std::isfinite(mean) || !std::isfinite(sd) || sd <= 0.0)
    throw invalid_parameter("sample_truncated_normal: mean/sd must be finite, sd > 0");
  if (!interval.valid())
    throw invalid_parameter("sample_truncated_normal: empty interval");

  double alpha = (interval.lower - mean) / sd;
  double beta = (interval.upper - mean) / sd;
  if (!(alpha < beta)) {
    // standardized bounds collapsed under rounding; return midpoint of the raw interval
    return 0.5 * (interval.lower + interval.upper);
  }

  // Work in the tail away from the origin: for alpha >= 0 flip to the upper
  // tail and use complementary CDF values, which stay accurate out to
  // |bound| ~ 37 sd instead of saturating at ~8 sd.
  const double u = rng.uniform();
  double z;
  if (alpha >= 0.0) {
    const double qa = normal_cdf_upper(alpha);
    const double qb = normal_cdf_upper(beta);
    double q = qa + u * (qb - qa);
    if (q <= 0.0) q = std::numeric_limits<double>::min();
    z = -normal_quantile(q);
  } else if (beta <= 0.0) {
    const double pa = normal_cdf(alpha);
    const double pb = normal_cdf(beta);
    double q = pb + u * (pa - pb);
    if (q <= 0.0) q = std::numeric_limits<double>::min();
    z = normal_quantile(q);
  } else {
    const double pa = normal_cdf(alpha);
    const double pb = normal_cdf(beta);
    z = normal_quantile(pa + u * (pb - pa));
  }

  double x = mean + sd * z;
  if (x <= interval.lower) x = std::nextafter(interval.lower, interval.upper);
  if (x >= interval.upper) x = std::nextafter(interval.upper, interval.lower);
  return x;
}

double sample_gamma(double shape, double scale, RngStream& rng) {
  if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) || !std::isfinite(scale))
    throw invalid_parameter("sample_gamma: shape and scale must be positive finite");
  if (shape < 1.0) {
    const double boost = std::pow(rng.uniform(), 1.0 / shape);
    return boost * sample_gamma(shape + 1.0, scale, rng);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = sample_std_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return scale * d * v;
  }
}

double sample_inverse_gamma(double shape, double scale, RngStream& rng) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw invalid_parameter("sample_inverse_gamma: shape and scale must be positive");
  return scale / sample_gamma(shape, 1.0, rng);
}

double sample_chi_squared(double dof, RngStream& rng) {
  return sample_gamma(0.5 * dof, 2.0, rng);
}

double sample_scaled_inv_chi_squared(double dof, double scale, RngStream& rng) {
  return dof * scale / sample_chi_squared(dof, rng);
}

Eigen::MatrixXd sample_wishart(double df, const Eigen::MatrixXd& scale_matrix,
                               RngStream& rng) {
  const auto p = scale_matrix.rows();
  if (scale_matrix.cols() != p)
    throw invalid_parameter("sample_wishart: scale matrix must be square");
  if (df < static_cast<double>(p))
    throw invalid_parameter("sample_wishart: df must be >= dimension");
  Eigen::LLT<Eigen::MatrixXd> llt(scale_matrix);
  if (llt.info() != Eigen::Success)
    throw decomposition_error("sample_wishart: scale matrix is not positive definite");
  Eigen::MatrixXd L = llt.matrixL();

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    A(i, i) = std::sqrt(sample_chi_squared(df - static_cast<double>(i), rng));
    for (Eigen::Index j = 0; j < i; ++j) A(i, j) = sample_std_normal(rng);
  }
  Eigen::MatrixXd LA = L * A;
  return LA * LA.transpose();
}

Eigen::VectorXd sample_dirichlet(const Eigen::VectorXd& alpha, RngStream& rng) {
  Eigen::VectorXd g(alpha.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i)
    g[i] = sample_gamma(alpha[i], 1.0, rng);
  const double s = g.sum();
  if (s <= 0.0) throw sampler_error("sample_dirichlet: degenerate draw");
  return g / s;
}

Eigen::VectorXd sample_mvn_chol(const Eigen::VectorXd& mean,
                                const Eigen::MatrixXd& chol_lower, RngStream& rng) {
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = sample_std_normal(rng);
  return mean + chol_lower * z;
}

Eigen::VectorXd ess_sample(const Eigen::VectorXd& current,
                           const Eigen::VectorXd& prior_mean,
                           const Eigen::MatrixXd& prior_chol, const LogLikFn& log_lik,
                           RngStream& rng, int max_shrink) {
  const double ll_cur = log_lik(current);
  if (std::isnan(ll_cur))
    throw sampler_error("ess_sample: log-likelihood is NaN at the current state");

  const Eigen::VectorXd nu = sample_mvn_chol(Eigen::VectorXd::Zero(current.size()),
                                             prior_chol, rng);
  const double log_y = ll_cur + std::log(rng.uniform());

  double theta = rng.uniform(0.0, 2.0 * M_PI);
  double theta_min = theta - 2.0 * M_PI;
  double theta_max = theta;

  const Eigen::VectorXd centered = current - prior_mean;
  for (int k = 0; k <= max_shrink; ++k) {
    Eigen::VectorXd proposal =
        prior_mean + centered * std::cos(theta) + nu * std::sin(theta);
    const double ll = log_lik(proposal);
    if (std::isnan(ll))
      throw sampler_error("ess_sample: log-likelihood is NaN at a proposal");
    if (ll > log_y) return proposal;
    if (theta < 0.0)
      theta_min = theta;
    else
      theta_max = theta;
    theta = rng.uniform(theta_min, theta_max);
  }
  throw sampler_error("ess_sample: slice bracket exhausted after " +
                      std::to_string(max_shrink) + " shrink steps");
}

double ess_sample(double current, double prior_mean, double prior_sd,
                  const ScalarLogLikFn& log_lik, RngStream& rng, int max_shrink) {
  Eigen::VectorXd cur(1), mean(1);
  cur[0] = current;
  mean[0] = prior_mean;
  Eigen::MatrixXd L(1, 1);
  L(0, 0) = prior_sd;
  auto wrap = [&](const Eigen::VectorXd& x) { return log_lik(x[0]); };
  return ess_sample(cur, mean, L, wrap, rng, max_shrink)[0];
}

} // namespace lgmix
