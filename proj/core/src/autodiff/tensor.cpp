#include "gazsl/autodiff/tensor.hpp"

#include "gazsl/error.hpp"

#include <algorithm>
#include <cmath>

namespace gazsl::ad {

Tensor::Tensor(std::size_t rows, std::size_t cols, double fill)
    : m_(Matrix::Constant(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols), fill)) {}

Tensor Tensor::row(std::span<const double> values) {
  Tensor t(1, values.size());
  std::copy(values.begin(), values.end(), t.values().begin());
  return t;
}

Tensor Tensor::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  const std::size_t k = n == 0 ? 0 : rows.begin()->size();
  Tensor t(n, k);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != k) throw ShapeError("Tensor::from_rows: ragged rows");
    std::size_t c = 0;
    for (double v : row) t(r, c++) = v;
    ++r;
  }
  return t;
}

double Tensor::item() const {
  if (!is_scalar()) throw ShapeError("Tensor::item: expected [1x1], got " + shape_string(*this));
  return m_(0, 0);
}

bool Tensor::all_finite() const {
  return std::all_of(m_.data(), m_.data() + m_.size(), [](double v) { return std::isfinite(v); });
}

std::string shape_string(const Tensor& t) {
  return "[" + std::to_string(t.rows()) + "x" + std::to_string(t.cols()) + "]";
}

}  // namespace gazsl::ad
