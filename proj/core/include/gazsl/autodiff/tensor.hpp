#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace gazsl::ad {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense rank-2 array of doubles stored row-major.
///
/// Every quantity in the networks here is a matrix: a batch of row vectors,
/// a weight matrix, a bias row, or a 1x1 scalar. Rank-1 data is represented
/// as a single row.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols, double fill = 0.0);
  explicit Tensor(Matrix m) : m_(std::move(m)) {}

  static Tensor scalar(double v) { return Tensor(1, 1, v); }
  static Tensor row(std::span<const double> values);
  static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return static_cast<std::size_t>(m_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(m_.cols()); }
  std::size_t size() const { return static_cast<std::size_t>(m_.size()); }
  std::vector<std::size_t> shape() const { return {rows(), cols()}; }
  bool is_scalar() const { return rows() == 1 && cols() == 1; }

  double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  double& operator()(std::size_t r, std::size_t c) { return m_(r, c); }

  std::span<const double> values() const { return {m_.data(), size()}; }
  std::span<double> values() { return {m_.data(), size()}; }
  std::span<const double> row_span(std::size_t r) const { return {m_.data() + r * cols(), cols()}; }

  const Matrix& matrix() const { return m_; }
  Matrix& matrix() { return m_; }

  /// Value of a 1x1 tensor.
  double item() const;
  bool all_finite() const;

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.m_.rows() == b.m_.rows() && a.m_.cols() == b.m_.cols() && a.m_ == b.m_;
  }

 private:
  Matrix m_;
};

std::string shape_string(const Tensor& t);

}  // namespace gazsl::ad
