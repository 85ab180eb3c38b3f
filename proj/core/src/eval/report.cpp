#include "gazsl/eval/report.hpp"

#include "gazsl/error.hpp"
#include "gazsl/gan/artifact.hpp"
#include "gazsl/gan/trainer.hpp"
#include "gazsl/util/hash.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace gazsl::eval {
namespace {

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::uint64_t class_seed(std::uint64_t seed, int class_id) {
  util::Fnv1a h;
  h.update(seed);
  h.update(static_cast<std::uint64_t>(static_cast<std::int64_t>(class_id)));
  return h.value();
}

void require_unit(const std::string& name, double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("report: " + name + " = " + std::to_string(v) + " outside [0, 1]");
}

}  // namespace

EvalInputs prepare_eval(const gan::GanModel& model, const data::DatasetBundle& bundle, const text::Stoplist& stoplist) {
  data::validate(bundle);
  EvalInputs in;
  in.seen_classes = sorted(bundle.split.seen);
  in.unseen_classes = sorted(bundle.split.unseen);
  if (in.seen_classes != model.seen_classes) {
    throw ValidationError("dataset seen classes do not match the classes the model was trained on");
  }
  if (bundle.dim() != model.feature_dim) {
    throw ValidationError("dataset features have " + std::to_string(bundle.dim()) + " dimensions, model expects " +
                          std::to_string(model.feature_dim));
  }

  const auto seen_docs = bundle.documents_of(in.seen_classes);
  const auto unseen_docs = bundle.documents_of(in.unseen_classes);
  const text::EncodedCorpus corpus = text::encode_corpus(seen_docs, unseen_docs, stoplist);
  if (corpus.vocabulary.digest() != model.vocabulary_digest) {
    throw ValidationError("vocabulary digest " + corpus.vocabulary.digest() + " does not match the model's " +
                          model.vocabulary_digest + " (different documents or stop-word list?)");
  }
  for (std::size_t i = 0; i < corpus.class_ids.size(); ++i) {
    ad::Tensor row(1, corpus.vectors[i].dimension);
    for (const auto& [index, weight] : corpus.vectors[i].entries) row(0, index) = weight;
    in.class_text.emplace(corpus.class_ids[i], std::move(row));
  }
  in.zero_text_classes = corpus.zero_vector_classes;

  const auto seen_rows = bundle.instances_of(in.seen_classes);
  const auto unseen_rows = bundle.instances_of(in.unseen_classes);
  std::size_t clamped = 0;
  in.seen_queries = model.scaler.transform(bundle.rows(seen_rows), &clamped);
  in.unseen_queries = model.scaler.transform(bundle.rows(unseen_rows), &clamped);
  in.seen_labels = bundle.labels_at(seen_rows);
  in.unseen_labels = bundle.labels_at(unseen_rows);
  in.clamped_values = clamped;
  return in;
}

SynthBank build_bank(const gan::GanModel& model, const EvalInputs& inputs, std::span<const int> classes,
                     std::size_t per_class, std::uint64_t seed) {
  std::map<int, ad::Tensor> vectors;
  for (int c : classes) {
    const auto it = inputs.class_text.find(c);
    if (it == inputs.class_text.end()) throw ValidationError("no text vector for class " + std::to_string(c));
    vectors.emplace(c, gan::synthesize_features(model, it->second, per_class, class_seed(seed, c)));
  }
  return SynthBank(std::move(vectors));
}

double zsl_top1(const SynthBank& unseen_bank, const EvalInputs& inputs, NnMode mode) {
  return top1_accuracy(classify_all(inputs.unseen_queries, unseen_bank, mode), inputs.unseen_labels);
}

SucCurve gzsl_eval(const SynthBank& full_bank, const EvalInputs& inputs, bool dense_grid) {
  const GzslScores scores = gzsl_scores(inputs.seen_queries, inputs.seen_labels, inputs.unseen_queries,
                                        inputs.unseen_labels, full_bank, inputs.seen_classes);
  std::vector<double> grid = default_calibration_grid(scores);
  if (dense_grid) {
    const double lo = grid.front();
    const double hi = grid.back();
    grid.resize(10001);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = lo + (hi - lo) * static_cast<double>(i) / 10000.0;
  }
  return gzsl_curve(scores, grid);
}

RetrievalResult retrieval_eval(const SynthBank& unseen_bank, const EvalInputs& inputs, double ratio) {
  return retrieval_map(unseen_bank, inputs.unseen_queries, inputs.unseen_labels, ratio);
}

EvalReport make_report(const gan::GanModel& model, const data::DatasetBundle& bundle, const EvalInputs& inputs,
                       std::size_t per_class) {
  EvalReport r;
  r.dataset = bundle.name;
  r.split_style = bundle.split.style;
  r.config_digest = gan::config_digest(model.config);
  r.run_digest = model.run_digest;
  r.bank_per_class = per_class;
  r.clamped_values = inputs.clamped_values;
  r.zero_text_classes = inputs.zero_text_classes;
  return r;
}

void EvalReport::validate() const {
  for (const auto& [name, v] : top1) require_unit("top1." + name, v);
  if (ausuc) require_unit("ausuc", *ausuc);
  for (const auto& [ratio, v] : map_at) require_unit("map@" + ratio, v);
}

std::string format_ratio(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", ratio);
  return buf;
}

void to_json(nlohmann::json& j, const EvalReport& r) {
  j = nlohmann::json{{"dataset", r.dataset},
                     {"split_style", r.split_style},
                     {"config_digest", r.config_digest},
                     {"run_digest", r.run_digest},
                     {"bank_per_class", r.bank_per_class},
                     {"top1", r.top1},
                     {"map_at", r.map_at},
                     {"clamped_values", r.clamped_values},
                     {"zero_text_classes", r.zero_text_classes},
                     {"config", r.config}};
  j["ausuc"] = r.ausuc ? nlohmann::json(*r.ausuc) : nlohmann::json(nullptr);
}

void write_report(const EvalReport& report, const std::filesystem::path& path) {
  report.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write report " + path.string());
  out << nlohmann::json(report).dump(2) << '\n';
  if (!out) throw Error("failed writing report " + path.string());
}

void write_suc_csv(const SucCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write curve " + path.string());
  out << "A_S_to_T,A_U_to_T\n";
  char buf[64];
  for (const SucPoint& p : curve.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.acc_seen, p.acc_unseen);
    out << buf;
  }
  if (!out) throw Error("failed writing curve " + path.string());
}

}  // namespace gazsl::eval
