#pragma once

#include "gazsl/data/dataset.hpp"
#include "gazsl/eval/metrics.hpp"
#include "gazsl/eval/nearest.hpp"
#include "gazsl/gan/model.hpp"
#include "gazsl/text/stopwords.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gazsl::eval {

/// Dataset queries in the model's scaled feature space, plus class texts
/// encoded with the model's vocabulary.
struct EvalInputs {
  std::vector<int> seen_classes;    // ascending
  std::vector<int> unseen_classes;  // ascending
  ad::Tensor seen_queries;
  std::vector<int> seen_labels;
  ad::Tensor unseen_queries;
  std::vector<int> unseen_labels;
  std::map<int, ad::Tensor> class_text;  // [1 x T] per class of S u U
  std::vector<int> zero_text_classes;
  std::size_t clamped_values = 0;  // query entries clamped by the scaler
};

/// Rebuilds the vocabulary from the seen-class documents and checks it
/// against the model's digest. Throws ValidationError when the dataset does
/// not match the model (vocabulary, seen classes or feature width).
EvalInputs prepare_eval(const gan::GanModel& model, const data::DatasetBundle& bundle, const text::Stoplist& stoplist);

/// `per_class` generated features for each class, each class drawing its
/// own noise stream derived from (seed, class id).
SynthBank build_bank(const gan::GanModel& model, const EvalInputs& inputs, std::span<const int> classes,
                     std::size_t per_class, std::uint64_t seed);

struct EvalReport {
  std::string dataset;
  std::string split_style;
  std::string config_digest;
  std::string run_digest;
  std::size_t bank_per_class = 0;
  std::map<std::string, double> top1;     // e.g. "unseen_instance", "unseen_pivot"
  std::optional<double> ausuc;
  std::map<std::string, double> map_at;  // ratio as printed ("0.25") -> mAP
  std::size_t clamped_values = 0;
  std::vector<int> zero_text_classes;
  nlohmann::json config;  // resolved model and evaluation settings

  /// Throws ValidationError if any metric is outside [0, 1].
  void validate() const;
};

/// Unseen-class top-1 for one nearest-neighbour mode.
double zsl_top1(const SynthBank& unseen_bank, const EvalInputs& inputs, NnMode mode);

/// Seen and unseen queries against pivots of S u U.
SucCurve gzsl_eval(const SynthBank& full_bank, const EvalInputs& inputs, bool dense_grid = false);

/// Unseen instances retrieved by unseen-class pivots.
RetrievalResult retrieval_eval(const SynthBank& unseen_bank, const EvalInputs& inputs, double ratio);

/// Report shell with dataset and model identity filled in.
EvalReport make_report(const gan::GanModel& model, const data::DatasetBundle& bundle, const EvalInputs& inputs,
                       std::size_t per_class);

std::string format_ratio(double ratio);

void to_json(nlohmann::json& j, const EvalReport& r);
void write_report(const EvalReport& report, const std::filesystem::path& path);
/// Two columns A_S_to_T,A_U_to_T in curve order.
void write_suc_csv(const SucCurve& curve, const std::filesystem::path& path);

}  // namespace gazsl::eval
