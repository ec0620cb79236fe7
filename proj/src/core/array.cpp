#include "fwiforge/core/array.hpp"

#include <algorithm>
#include <string>

#include "fwiforge/core/errors.hpp"

namespace fwiforge {

Array2D::Array2D(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Array2D::Array2D(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("Array2D: " + std::to_string(data_.size()) + " values for a " +
                         std::to_string(rows) + "x" + std::to_string(cols) + " array");
  }
}

double Array2D::min() const {
  if (data_.empty()) throw DimensionError("Array2D::min on empty array");
  return *std::min_element(data_.begin(), data_.end());
}

double Array2D::max() const {
  if (data_.empty()) throw DimensionError("Array2D::max on empty array");
  return *std::max_element(data_.begin(), data_.end());
}

void require_same_shape(const Array2D& a, const Array2D& b, const char* op) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
  }
}

}  // namespace fwiforge
