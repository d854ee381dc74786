#include "blendnet/nn/adam.hpp"

#include <cmath>
#include <string>

#include "blendnet/error.hpp"

namespace blendnet::nn {

void adam_step(std::vector<double>& params, const std::vector<double>& grad, AdamState& state,
               const AdamConfig& config) {
  if (grad.size() != params.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(grad.size()) + " gradients vs " +
                                          std::to_string(params.size()) + " parameters");
  }
  if (state.step == 0 && state.m.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw Error(Errc::LengthMismatch, "optimizer state sized for " + std::to_string(state.m.size()) +
                                          " parameters, got " + std::to_string(params.size()));
  }

  state.step += 1;
  const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * grad[i];
    state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= config.lr * m_hat / (std::sqrt(v_hat) + config.eps);
  }
}

}  // namespace blendnet::nn
