#include "blendnet/nn/loss.hpp"

#include <string>

#include "blendnet/error.hpp"

namespace blendnet::nn {

LossResult mse_loss(const Matrix& pred, const std::vector<double>& target) {
  if (pred.cols() != 1) {
    throw Error(Errc::ShapeMismatch,
                "mse expects scalar predictions, got width " + std::to_string(pred.cols()));
  }
  if (pred.rows() != target.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(pred.rows()) + " predictions vs " +
                                          std::to_string(target.size()) + " targets");
  }
  if (pred.rows() == 0) {
    throw Error(Errc::Empty, "mse over an empty batch");
  }

  const double inv_n = 1.0 / static_cast<double>(pred.rows());
  LossResult out;
  out.grad = Matrix(pred.rows(), 1);
  for (std::size_t i = 0; i < pred.rows(); ++i) {
    const double diff = pred(i, 0) - target[i];
    out.value += diff * diff * inv_n;
    out.grad(i, 0) = 2.0 * diff * inv_n;
  }
  return out;
}

}  // namespace blendnet::nn
