#include "gazsl/data/scaler.hpp"

#include "gazsl/error.hpp"

#include <algorithm>
#include <cmath>

namespace gazsl::data {

FeatureScaler::FeatureScaler(std::vector<double> center, std::vector<double> scale)
    : center_(std::move(center)), scale_(std::move(scale)) {
  if (center_.size() != scale_.size()) throw ValidationError("FeatureScaler: center/scale size mismatch");
  for (double s : scale_) {
    if (!(s > 0.0)) throw ValidationError("FeatureScaler: scale must be positive");
  }
}

FeatureScaler FeatureScaler::fit(const ad::Tensor& features) {
  if (features.rows() == 0 || features.cols() == 0) throw ValidationError("fit_scaler: empty feature matrix");
  const auto& m = features.matrix();
  FeatureScaler s;
  s.center_.resize(features.cols());
  s.scale_.resize(features.cols());
  for (std::size_t d = 0; d < features.cols(); ++d) {
    const double lo = m.col(static_cast<Eigen::Index>(d)).minCoeff();
    const double hi = m.col(static_cast<Eigen::Index>(d)).maxCoeff();
    if (hi > lo) {
      s.center_[d] = 0.5 * (lo + hi);
      s.scale_[d] = 2.0 * kRange / (hi - lo);
    } else {
      s.center_[d] = lo;
      s.scale_[d] = 1.0;
      s.constant_dims_.push_back(d);
    }
  }
  return s;
}

ad::Tensor FeatureScaler::transform(const ad::Tensor& features, std::size_t* clamped) const {
  if (features.cols() != dim()) {
    throw ShapeError("FeatureScaler::transform: features have " + std::to_string(features.cols()) +
                     " columns, scaler expects " + std::to_string(dim()));
  }
  ad::Tensor out(features.rows(), features.cols());
  std::size_t n_clamped = 0;
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (std::size_t d = 0; d < features.cols(); ++d) {
      const double y = (features(r, d) - center_[d]) * scale_[d];
      const double c = std::clamp(y, -kRange, kRange);
      if (std::abs(c - y) > 1e-12) ++n_clamped;  // ignore rounding at the fitted endpoints
      out(r, d) = c;
    }
  }
  if (clamped != nullptr) *clamped += n_clamped;
  return out;
}

ad::Tensor FeatureScaler::inverse(const ad::Tensor& scaled) const {
  if (scaled.cols() != dim()) throw ShapeError("FeatureScaler::inverse: dimension mismatch");
  ad::Tensor out(scaled.rows(), scaled.cols());
  for (std::size_t r = 0; r < scaled.rows(); ++r) {
    for (std::size_t d = 0; d < scaled.cols(); ++d) out(r, d) = scaled(r, d) / scale_[d] + center_[d];
  }
  return out;
}

}  // namespace gazsl::data
