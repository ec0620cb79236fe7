#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fwiforge {

/// Dense row-major 2D array of doubles.
class Array2D {
 public:
  Array2D() = default;
  Array2D(std::size_t rows, std::size_t cols, double fill = 0.0);
  Array2D(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::vector<double>& values() const noexcept { return data_; }

  bool same_shape(const Array2D& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  double min() const;
  double max() const;

  bool operator==(const Array2D&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Throws DimensionError unless both arrays have the same shape.
void require_same_shape(const Array2D& a, const Array2D& b, const char* op);

}  // namespace fwiforge
