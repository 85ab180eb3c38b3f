#pragma once

#include "gazsl/autodiff/tensor.hpp"

#include <cstddef>
#include <vector>

namespace gazsl::data {

/// Per-dimension affine map y = (x - center) * scale taking the fitted data
/// range onto [-kRange, kRange], inside the generator's Tanh range.
class FeatureScaler {
 public:
  static constexpr double kRange = 0.95;

  FeatureScaler() = default;
  FeatureScaler(std::vector<double> center, std::vector<double> scale);

  /// Fit on seen-class features. Constant dimensions get scale 1 and map to 0;
  /// they are listed in constant_dimensions(). Throws ValidationError on empty input.
  static FeatureScaler fit(const ad::Tensor& features);

  /// Values falling outside [-kRange, kRange] are clamped; the number of
  /// clamped entries is added to *clamped when given.
  ad::Tensor transform(const ad::Tensor& features, std::size_t* clamped = nullptr) const;
  /// Inverse of transform for unclamped values.
  ad::Tensor inverse(const ad::Tensor& scaled) const;

  std::size_t dim() const { return center_.size(); }
  const std::vector<double>& center() const { return center_; }
  const std::vector<double>& scale() const { return scale_; }
  const std::vector<std::size_t>& constant_dimensions() const { return constant_dims_; }

 private:
  std::vector<double> center_;
  std::vector<double> scale_;
  std::vector<std::size_t> constant_dims_;
};

}  // namespace gazsl::data
