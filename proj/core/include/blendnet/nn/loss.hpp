#pragma once

#include <vector>

#include "blendnet/nn/tensor.hpp"

namespace blendnet::nn {

struct LossResult {
  double value = 0.0;
  Matrix grad;  // d value / d pred, same shape as pred
};

// Mean squared error over a batch of scalar predictions (n x 1).
LossResult mse_loss(const Matrix& pred, const std::vector<double>& target);

}  // namespace blendnet::nn
