#pragma once

#include "gazsl/autodiff/tensor.hpp"
#include "gazsl/data/dataset.hpp"
#include "gazsl/data/scaler.hpp"
#include "gazsl/gan/model.hpp"
#include "gazsl/gan/pivots.hpp"
#include "gazsl/text/stopwords.hpp"
#include "gazsl/text/tfidf.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace gazsl::gan {

/// Inputs of the training loop, already encoded. Class indices 0..C-1 are
/// positions in the classifier head.
struct TrainingData {
  ad::Tensor features;      // N x X, scaled into the generator's output range
  std::vector<int> labels;  // class index per row
  ad::Tensor class_text;    // C x T dense text vectors
  VisualPivots pivots;      // class_ids == 0..C-1

  std::size_t num_classes() const { return class_text.rows(); }
  void validate() const;
};

/// A dataset bundle turned into training inputs plus what evaluation needs.
struct PreparedDataset {
  TrainingData training;
  std::vector<int> seen_classes;   // class index -> class id
  data::FeatureScaler scaler;      // fitted on seen-class features only
  text::EncodedCorpus corpus;      // vocabulary over seen documents; all classes encoded
  std::string input_digest;        // features, labels, documents, split and stop words

  /// Dense text row [1 x T] for any class of the split.
  ad::Tensor text_of(int class_id) const;
};

PreparedDataset prepare(const data::DatasetBundle& bundle, const text::Stoplist& stoplist);

struct LossRecord {
  int step = 0;
  double loss_d = 0.0;  // mean over the loop's discriminator updates; 0 when D is disabled
  double loss_g = 0.0;  // 0 when D is disabled
  double loss_e = 0.0;
  double wall_ms = 0.0;
};

struct TrainOptions {
  std::function<void(const LossRecord&)> on_step;
  bool record_wall_time = false;  // off keeps histories byte-reproducible
};

struct TrainResult {
  GanModel model;
  std::vector<LossRecord> history;
  std::uint64_t discriminator_updates = 0;
  std::uint64_t generator_updates = 0;
};

/// Parameters exactly as train() starts from them for this config and seed.
GanModel initialize_model(const TrainingData& data, const TrainConfig& config);

/// Alternates n_d critic updates with one generator update per loop.
/// Throws NumericalError naming the step and loss if a loss is not finite.
TrainResult train(const TrainingData& data, const TrainConfig& config, const TrainOptions& options = {});

/// train() on a prepared dataset; the model also records the scaler, seen
/// classes, vocabulary digest and run digest.
TrainResult train(const PreparedDataset& prepared, const TrainConfig& config, const TrainOptions& options = {});

/// Noise rows drawn i.i.d. N(0,1) from a generator seeded with `seed`, row by row.
ad::Tensor sample_noise(std::size_t n, std::size_t z_dim, std::uint64_t seed);

/// n generated features for one class text row [1 x T].
ad::Tensor synthesize_features(const GanModel& model, const ad::Tensor& text_row, std::size_t n, std::uint64_t seed);

/// Mean over classes of ||mean of n generated features - pivot||.
double mean_pivot_distance(const GanModel& model, const TrainingData& data, std::size_t samples_per_class,
                           std::uint64_t seed);

}  // namespace gazsl::gan
