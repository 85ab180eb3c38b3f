#include "gazsl/gan/pivots.hpp"

#include "gazsl/error.hpp"

#include <algorithm>
#include <map>

namespace gazsl::gan {

std::ptrdiff_t VisualPivots::row_of(int class_id) const {
  auto it = std::lower_bound(class_ids.begin(), class_ids.end(), class_id);
  if (it == class_ids.end() || *it != class_id) return -1;
  return it - class_ids.begin();
}

PivotResult compute_visual_pivots(const ad::Tensor& features, std::span<const int> labels,
                                  std::span<const int> expected_classes) {
  if (features.rows() != labels.size()) {
    throw ShapeError("compute_visual_pivots: " + std::to_string(features.rows()) + " rows vs " +
                     std::to_string(labels.size()) + " labels");
  }
  std::vector<int> classes(expected_classes.begin(), expected_classes.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

  std::map<int, std::pair<ad::Matrix, std::size_t>> sums;
  for (int c : classes) sums[c] = {ad::Matrix::Zero(1, static_cast<Eigen::Index>(features.cols())), 0};
  for (std::size_t r = 0; r < labels.size(); ++r) {
    auto it = sums.find(labels[r]);
    if (it == sums.end()) continue;
    it->second.first += features.matrix().row(static_cast<Eigen::Index>(r));
    ++it->second.second;
  }

  PivotResult out;
  for (const auto& [c, acc] : sums) {
    if (acc.second == 0) {
      out.empty_classes.push_back(c);
      continue;
    }
    out.pivots.class_ids.push_back(c);
  }
  out.pivots.centroids = ad::Tensor(out.pivots.class_ids.size(), features.cols());
  for (std::size_t i = 0; i < out.pivots.class_ids.size(); ++i) {
    const auto& acc = sums[out.pivots.class_ids[i]];
    out.pivots.centroids.matrix().row(static_cast<Eigen::Index>(i)) = acc.first / static_cast<double>(acc.second);
  }
  return out;
}

}  // namespace gazsl::gan
