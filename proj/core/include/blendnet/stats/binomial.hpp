#pragma once

#include <cstdint>

namespace blendnet::stats {

// Upper-tail binomial probability P(X >= x0) for X ~ Binomial(n, theta0),
// the exact confidence test behind "accuracy x0/n is no worse than theta0".
// Evaluated in log space so counts in the thousands survive.
double binom_pvalue(std::int64_t n, std::int64_t x0, double theta0);

// Inverts the test: the theta0 at which binom_pvalue(n, x0, theta0) equals
// alpha, by bisection on the strictly increasing p-value. Reads as "the
// true success rate exceeds theta0 at significance alpha".
double theta_at_significance(std::int64_t n, std::int64_t x0, double alpha);

}  // namespace blendnet::stats
