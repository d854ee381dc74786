#pragma once

#include <cstdint>
#include <vector>

namespace blendnet::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First and second moment accumulators; step counts completed updates.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t step = 0;
};

// One bias-corrected update in place. A fresh state sizes itself to the
// parameters on first use and must keep that length afterwards.
void adam_step(std::vector<double>& params, const std::vector<double>& grad, AdamState& state,
               const AdamConfig& config);

}  // namespace blendnet::nn
