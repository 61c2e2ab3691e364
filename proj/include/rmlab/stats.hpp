#pragma once

#include <cstdint>

namespace rmlab::stats {

// One-sided tail mass of the standard normal beyond `sigmas`.
double normal_upper_tail(double sigmas);

// P[Bin(n, p) <= x], exact summation in log space.
double binom_cdf(std::int64_t x, std::int64_t n, double p);

// Exact-binomial one-sided tests at a sigma-equivalent level. The hypothesis
// "true rate >= p0" (resp. "<= p0") is retained unless the observed count is
// in the alpha tail under Bin(n, p0).
bool consistent_with_rate_at_least(std::int64_t successes, std::int64_t trials, double p0,
                                   double sigmas);
bool consistent_with_rate_at_most(std::int64_t successes, std::int64_t trials, double p0,
                                  double sigmas);

// Clopper-Pearson one-sided confidence bounds on a binomial rate.
double clopper_pearson_lower(std::int64_t successes, std::int64_t trials, double alpha);
double clopper_pearson_upper(std::int64_t successes, std::int64_t trials, double alpha);

// Upper tail of the chi-squared distribution with `dof` degrees of freedom.
double chi_squared_pvalue(double stat, double dof);

}  // namespace rmlab::stats
