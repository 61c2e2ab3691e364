#include "rmlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rmlab::stats {
namespace {

double log_binom_coeff(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

// Regularized lower incomplete gamma P(a, x) by series, upper Q(a, x) by
// continued fraction; standard split at x = a + 1.
double gamma_p_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  double ap = a;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double normal_upper_tail(double sigmas) { return 0.5 * std::erfc(sigmas / std::sqrt(2.0)); }

double binom_cdf(std::int64_t x, std::int64_t n, double p) {
  if (n < 0) throw std::invalid_argument("binom_cdf: negative n");
  if (x < 0) return 0.0;
  if (x >= n) return 1.0;
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;

  // log pmf at k, accumulated with a running maximum for stable summation
  const double logit = std::log(p) - std::log1p(-p);
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(x) + 1);
  double lp = static_cast<double>(n) * std::log1p(-p);  // k = 0
  double best = lp;
  logs.push_back(lp);
  for (std::int64_t k = 1; k <= x; ++k) {
    lp = log_binom_coeff(n, k) + static_cast<double>(k) * logit +
         static_cast<double>(n) * std::log1p(-p);
    logs.push_back(lp);
    best = std::max(best, lp);
  }
  double acc = 0.0;
  for (double v : logs) acc += std::exp(v - best);
  const double res = std::exp(best) * acc;
  return std::min(res, 1.0);
}

bool consistent_with_rate_at_least(std::int64_t successes, std::int64_t trials, double p0,
                                   double sigmas) {
  if (p0 <= 0.0) return true;
  const double alpha = normal_upper_tail(sigmas);
  return binom_cdf(successes, trials, p0) >= alpha;
}

bool consistent_with_rate_at_most(std::int64_t successes, std::int64_t trials, double p0,
                                  double sigmas) {
  if (p0 >= 1.0) return true;
  const double alpha = normal_upper_tail(sigmas);
  const double sf = 1.0 - binom_cdf(successes - 1, trials, p0);
  return sf >= alpha;
}

double clopper_pearson_lower(std::int64_t successes, std::int64_t trials, double alpha) {
  if (successes <= 0) return 0.0;
  // smallest p with P[Bin(trials, p) >= successes] >= alpha
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double sf = 1.0 - binom_cdf(successes - 1, trials, mid);
    if (sf >= alpha)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double clopper_pearson_upper(std::int64_t successes, std::int64_t trials, double alpha) {
  if (successes >= trials) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double cdf = binom_cdf(successes, trials, mid);
    if (cdf >= alpha)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double chi_squared_pvalue(double stat, double dof) {
  if (stat <= 0.0) return 1.0;
  const double a = dof / 2.0, x = stat / 2.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

}  // namespace rmlab::stats
