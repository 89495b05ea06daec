#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace puea {

// Dense column-major matrix of doubles. Column-major is the layout the
// compute kernels consume: batched per-point operations vectorize across
// rows while walking feature columns contiguously.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[j * rows_ + i];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[j * rows_ + i];
  }

  [[nodiscard]] const double* col(std::size_t j) const {
    return data_.data() + j * rows_;
  }
  double* col(std::size_t j) { return data_.data() + j * rows_; }

  void set_row(std::size_t i, std::span<const double> values) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = values[j];
  }

  [[nodiscard]] std::vector<double> row(std::size_t i) const {
    std::vector<double> out(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out[j] = (*this)(i, j);
    return out;
  }

  [[nodiscard]] FeatureMatrix select_rows(
      std::span<const std::size_t> idx) const {
    FeatureMatrix out(idx.size(), cols_);
    for (std::size_t j = 0; j < cols_; ++j) {
      const double* src = col(j);
      double* dst = out.col(j);
      for (std::size_t t = 0; t < idx.size(); ++t) dst[t] = src[idx[t]];
    }
    return out;
  }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace puea
