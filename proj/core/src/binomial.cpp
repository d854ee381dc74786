#include "blendnet/stats/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "blendnet/error.hpp"

namespace blendnet::stats {

double binom_pvalue(std::int64_t n, std::int64_t x0, double theta0) {
  if (n < 1) {
    throw Error(Errc::DomainError, "trial count must be at least 1, got " + std::to_string(n));
  }
  if (x0 < 0 || x0 > n) {
    throw Error(Errc::DomainError, "successes " + std::to_string(x0) + " outside [0, " +
                                       std::to_string(n) + "]");
  }
  if (!(theta0 > 0.0) || !(theta0 < 1.0)) {
    throw Error(Errc::DomainError, "theta0 must lie strictly inside (0, 1)");
  }
  if (x0 == 0) return 1.0;

  const double log_t = std::log(theta0);
  const double log_q = std::log1p(-theta0);
  const double lg_n1 = std::lgamma(static_cast<double>(n) + 1.0);

  // Log of each tail term, then one log-sum-exp so tiny tails keep their
  // relative precision instead of underflowing term by term.
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(n - x0 + 1));
  double peak = -HUGE_VAL;
  for (std::int64_t i = x0; i <= n; ++i) {
    const double di = static_cast<double>(i);
    const double dn = static_cast<double>(n);
    const double lt = lg_n1 - std::lgamma(di + 1.0) - std::lgamma(dn - di + 1.0) + di * log_t +
                      (dn - di) * log_q;
    logs.push_back(lt);
    peak = std::max(peak, lt);
  }
  double sum = 0.0;
  for (double lt : logs) sum += std::exp(lt - peak);
  const double p = std::exp(peak + std::log(sum));
  return std::clamp(p, 0.0, 1.0);
}

double theta_at_significance(std::int64_t n, std::int64_t x0, double alpha) {
  if (n < 1 || x0 < 1 || x0 > n) {
    throw Error(Errc::DomainError, "need 1 <= x0 <= n, got x0 = " + std::to_string(x0) + ", n = " +
                                       std::to_string(n));
  }
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw Error(Errc::NoRoot, "no theta0 reaches significance " + std::to_string(alpha));
  }

  // With x0 >= 1 the p-value runs continuously from 0 to 1 as theta0 sweeps
  // (0, 1), so any interior alpha brackets a root.
  double lo = 1e-12;
  double hi = 1.0 - 1e-12;
  double mid = 0.5;
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double p = binom_pvalue(n, x0, mid);
    if (std::abs(p - alpha) < 1e-10) break;
    if (p < alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

}  // namespace blendnet::stats
