#pragma once

#include <cstddef>
#include <vector>

namespace blendnet::nn {

// Dense row-major matrix of doubles. Rows hold batch examples, columns
// hold features.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  const double* row(std::size_t r) const { return data_.data() + r * cols_; }
  double* row(std::size_t r) { return data_.data() + r * cols_; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// y = x * transpose(w) + bias, with bias broadcast over rows. w is stored
// (out x in) so both the forward pass and its gradients walk contiguous
// rows.
Matrix linear_forward(const Matrix& x, const Matrix& w, const std::vector<double>& bias);

}  // namespace blendnet::nn
