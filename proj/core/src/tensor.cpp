#include "blendnet/nn/tensor.hpp"

#include <string>

#include "blendnet/error.hpp"

namespace blendnet::nn {

Matrix linear_forward(const Matrix& x, const Matrix& w, const std::vector<double>& bias) {
  if (x.cols() != w.cols()) {
    throw Error(Errc::ShapeMismatch, "linear input width " + std::to_string(x.cols()) +
                                         " vs weight fan-in " + std::to_string(w.cols()));
  }
  if (bias.size() != w.rows()) {
    throw Error(Errc::ShapeMismatch, "bias length " + std::to_string(bias.size()) +
                                         " vs weight fan-out " + std::to_string(w.rows()));
  }

  Matrix y(x.rows(), w.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double* xi = x.row(i);
    double* yi = y.row(i);
    for (std::size_t o = 0; o < w.rows(); ++o) {
      const double* wo = w.row(o);
      double acc = bias[o];
      for (std::size_t k = 0; k < w.cols(); ++k) {
        acc += xi[k] * wo[k];
      }
      yi[o] = acc;
    }
  }
  return y;
}

}  // namespace blendnet::nn
