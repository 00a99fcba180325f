#pragma once

namespace opshape {

// Standard normal distribution.
double normal_cdf(double z);
/// 1 - Phi(z), computed without cancellation for large z.
double normal_sf(double z);
/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

/// Regularized lower and upper incomplete gamma functions P(a, x), Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// Upper-tail probability of the chi-square distribution with df degrees of
/// freedom.
double chisq_sf(double x, double df);

}  // namespace opshape
