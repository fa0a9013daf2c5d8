#pragma once

namespace postlasso {

// Standard normal CDF, absolute error well below 1e-7.
double normal_cdf(double x);

// Standard normal quantile via the AS241 rational approximation (PPND16).
// Throws OutOfDomain unless 0 < p < 1.
double normal_quantile(double p);

// Two-sided p-value for a standard-normal reference: 2(1 - Phi(|t|)).
double two_sided_p(double t);

}  // namespace postlasso
