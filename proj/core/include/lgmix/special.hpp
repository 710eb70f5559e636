#ifndef LGMIX_SPECIAL_HPP
#define LGMIX_SPECIAL_HPP

namespace lgmix {

/// Standard normal CDF, accurate in both tails (erfc-based).
double normal_cdf(double x);

/// Upper tail P(X > x) without cancellation for large x.
double normal_cdf_upper(double x);

/// Standard normal quantile, Wichura's AS 241 (PPND16), |error| < 1e-15 in p.
double normal_quantile(double p);

/// log N(x | mean, sd^2)
double normal_logpdf(double x, double mean, double sd);

/// log of the standard normal density
double std_normal_logpdf(double x);

/// log Gamma(x), thin wrapper kept for call-site uniformity
double log_gamma(double x);

} // namespace lgmix

#endif
