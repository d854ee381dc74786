#pragma once

#include <vector>

namespace blendnet::nn {

// Central-difference gradient of a scalar function of a parameter vector,
// the reference the analytic backward pass is checked against. Error
// shrinks as O(h^2) away from relu/abs kinks.
template <typename F>
std::vector<double> finite_diff_gradient(F&& f, std::vector<double> params, double h = 1e-6) {
  std::vector<double> grad(params.size(), 0.0);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + h;
    const double hi = f(params);
    params[i] = saved - h;
    const double lo = f(params);
    params[i] = saved;
    grad[i] = (hi - lo) / (2.0 * h);
  }
  return grad;
}

}  // namespace blendnet::nn
