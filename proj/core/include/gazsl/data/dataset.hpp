#pragma once

#include "gazsl/autodiff/tensor.hpp"
#include "gazsl/text/tfidf.hpp"

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gazsl::data {

struct Split {
  std::vector<int> seen;
  std::vector<int> unseen;
  std::string style;  // "SCS" / "SCE" or free-form; carried into reports
};

/// Visual features, instance labels, per-class documents and a seen/unseen split.
struct DatasetBundle {
  std::string name;
  ad::Tensor features;  // N x dim
  std::vector<int> labels;
  std::map<int, text::Document> documents;
  Split split;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }
  /// Row indices whose label is in `classes`, in increasing order.
  std::vector<std::size_t> instances_of(std::span<const int> classes) const;
  ad::Tensor rows(std::span<const std::size_t> indices) const;
  std::vector<int> labels_at(std::span<const std::size_t> indices) const;
  std::vector<text::Document> documents_of(std::span<const int> classes) const;
};

/// Checks S and U are disjoint, labels lie in S u U, every class has a
/// document and the feature/label counts agree. Throws ValidationError.
void validate(const DatasetBundle& bundle);

enum class FeatureFormat { Binary, Csv };

/// Reads `features.bin` (or `features.csv`), `labels.csv`, `docs/<id>.txt`
/// and `split.json` under `root`, then validates. Problems are reported with
/// the file and line.
DatasetBundle load_dataset(const std::filesystem::path& root);
void write_dataset(const DatasetBundle& bundle, const std::filesystem::path& root,
                   FeatureFormat format = FeatureFormat::Binary);

/// Little-endian: "GZFT", u32 version, u32 rows, u32 cols, then rows*cols f64.
ad::Tensor read_features_binary(const std::filesystem::path& path);
void write_features_binary(const ad::Tensor& features, const std::filesystem::path& path);
ad::Tensor read_features_csv(const std::filesystem::path& path);
void write_features_csv(const ad::Tensor& features, const std::filesystem::path& path);

inline constexpr std::uint32_t kFeatureFileVersion = 1;

}  // namespace gazsl::data
