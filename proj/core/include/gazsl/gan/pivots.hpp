#pragma once

#include "gazsl/autodiff/tensor.hpp"

#include <span>
#include <vector>

namespace gazsl::gan {

/// Per-class centroids of visual features, one row per class.
struct VisualPivots {
  std::vector<int> class_ids;  // sorted; row i of `centroids` belongs to class_ids[i]
  ad::Tensor centroids;

  /// Row index of a class, or -1 when the class has no pivot.
  std::ptrdiff_t row_of(int class_id) const;
  std::size_t size() const { return class_ids.size(); }
};

struct PivotResult {
  VisualPivots pivots;
  std::vector<int> empty_classes;  // expected classes without a single feature; no pivot emitted
};

/// Arithmetic mean of the features of each class in `expected_classes`.
/// Rows whose label is not expected are ignored.
PivotResult compute_visual_pivots(const ad::Tensor& features, std::span<const int> labels,
                                  std::span<const int> expected_classes);

}  // namespace gazsl::gan
