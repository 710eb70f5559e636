#ifndef LGMIX_DISTRIBUTIONS_HPP
#define LGMIX_DISTRIBUTIONS_HPP

#include <Eigen/Dense>
#include <functional>
#include <limits>

#include "lgmix/rng.hpp"

namespace lgmix {

/// Truncation domain, possibly unbounded on either side.
struct Interval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  static Interval whole() { return {}; }
  static Interval negative() { return {-std::numeric_limits<double>::infinity(), 0.0}; }
  static Interval positive() { return {0.0, std::numeric_limits<double>::infinity()}; }
  bool valid() const { return lower < upper; }
  bool contains(double x) const { return x > lower && x < upper; }
};

/// Standard normal draw via inverse CDF (one uniform per draw).
double sample_std_normal(RngStream& rng);

/// Normal(mean, sd^2) restricted to `interval`; inverse-CDF with tail-stable
/// bookkeeping so that bounds many standard deviations out do not stall or
/// return points outside the interval.
double sample_truncated_normal(double mean, double sd, const Interval& interval,
                               RngStream& rng);

/// Gamma(shape, scale) via Marsaglia-Tsang squeeze.
double sample_gamma(double shape, double scale, RngStream& rng);

/// InvGamma(shape, scale); for shape > 1 the mean is scale/(shape-1).
double sample_inverse_gamma(double shape, double scale, RngStream& rng);

double sample_chi_squared(double dof, RngStream& rng);

/// Scaled inverse chi-squared: dof * scale / chi2(dof).
double sample_scaled_inv_chi_squared(double dof, double scale, RngStream& rng);

/// Wishart(df, scale_matrix) by Bartlett decomposition; E[draw] = df * scale.
Eigen::MatrixXd sample_wishart(double df, const Eigen::MatrixXd& scale_matrix,
                               RngStream& rng);

Eigen::VectorXd sample_dirichlet(const Eigen::VectorXd& alpha, RngStream& rng);

/// Multivariate normal given the lower Cholesky factor of the covariance.
Eigen::VectorXd sample_mvn_chol(const Eigen::VectorXd& mean,
                                const Eigen::MatrixXd& chol_lower, RngStream& rng);

using LogLikFn = std::function<double(const Eigen::VectorXd&)>;
using ScalarLogLikFn = std::function<double(double)>;

/// One elliptical slice sampling transition targeting
///   N(x | prior_mean, L L') * exp(log_lik(x)).
/// Rejection-free; raises sampler_error after `max_shrink` bracket shrinks
/// or when log_lik returns NaN.
Eigen::VectorXd ess_sample(const Eigen::VectorXd& current,
                           const Eigen::VectorXd& prior_mean,
                           const Eigen::MatrixXd& prior_chol, const LogLikFn& log_lik,
                           RngStream& rng, int max_shrink = 100);

/// Scalar convenience overload with prior N(prior_mean, prior_sd^2).
double ess_sample(double current, double prior_mean, double prior_sd,
                  const ScalarLogLikFn& log_lik, RngStream& rng, int max_shrink = 100);

} // namespace lgmix

#endif
