#pragma once

#include "gazsl/autodiff/tensor.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace gazsl::eval {

enum class NnMode { Instance, Pivot };

const char* to_string(NnMode mode);
/// Accepts "instance" or "pivot"; throws ConfigError otherwise.
NnMode parse_nn_mode(const std::string& s);

/// Synthesized features per class plus their per-class means.
class SynthBank {
 public:
  SynthBank() = default;
  /// Throws ValidationError if a class has no vectors or widths disagree.
  explicit SynthBank(std::map<int, ad::Tensor> vectors);

  const std::vector<int>& class_ids() const { return class_ids_; }  // ascending
  const ad::Tensor& vectors_of(int class_id) const;
  /// Row i belongs to class_ids()[i].
  const ad::Tensor& pivots() const { return pivots_; }
  /// All vectors stacked in class order, with their labels.
  const ad::Tensor& stacked() const { return stacked_; }
  const std::vector<int>& stacked_labels() const { return stacked_labels_; }
  std::size_t num_classes() const { return class_ids_.size(); }
  std::size_t dim() const { return pivots_.cols(); }
  bool empty() const { return class_ids_.empty(); }
  /// Bank restricted to some of its classes; throws if one is absent.
  SynthBank subset(std::span<const int> classes) const;

 private:
  std::map<int, ad::Tensor> vectors_;
  std::vector<int> class_ids_;
  ad::Tensor pivots_;
  ad::Tensor stacked_;
  std::vector<int> stacked_labels_;
};

/// Euclidean 1-NN. Ties go to the lowest class id. Throws on an empty bank
/// or a width mismatch.
int classify_nn(std::span<const double> query, const SynthBank& bank, NnMode mode);
std::vector<int> classify_all(const ad::Tensor& queries, const SynthBank& bank, NnMode mode);

/// Squared Euclidean distances from each query row to each pivot row [Q x C].
ad::Tensor squared_distances(const ad::Tensor& queries, const ad::Tensor& points);

}  // namespace gazsl::eval
