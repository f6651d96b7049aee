#pragma once

namespace qmc {

/// Standard normal CDF.
double norm_cdf(double x);

/// Inverse standard normal CDF (Wichura's AS 241 rational approximations,
/// accurate to about 1e-15). p must lie in (0, 1).
double norm_ppf(double p);

/// Upper incomplete gamma function Gamma(a, x) = \int_x^inf t^{a-1} e^{-t} dt
/// for a > 0, x >= 0. Series expansion for x < a + 1, continued fraction
/// otherwise; relative accuracy around 1e-14.
double upper_incomplete_gamma(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double regularized_gamma_q(double a, double x);

/// Weibull(lambda, k) probability density at x >= 0.
double weibull_pdf(double x, double lambda, double k);

/// Mean of a Weibull(lambda, k) distribution: lambda * Gamma(1 + 1/k).
double weibull_mean(double lambda, double k);

}  // namespace qmc
