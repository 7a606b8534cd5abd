#pragma once

namespace psq {

/// Standard normal CDF.
double normal_cdf(double x);

/// Upper tail 1 - normal_cdf(x), accurate for large x.
double normal_sf(double x);

/// Standard normal quantile (probit). Absolute error below 1e-12 on (0, 1).
/// Throws Error{out_of_range} unless 0 < p < 1.
double probit(double p);

}  // namespace psq
