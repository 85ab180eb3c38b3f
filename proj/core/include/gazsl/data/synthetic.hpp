#pragma once

#include "gazsl/autodiff/tensor.hpp"
#include "gazsl/data/dataset.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace gazsl::data {

/// Desk-scale stand-in for a fine-grained dataset with per-class articles.
///
/// Classes are Gaussian clusters sharing one anisotropic covariance. With
/// num_modes > 1 every class is a mixture: each instance is shifted by one of
/// a few offsets shared by all classes, picked uniformly. Each class article
/// contains one topic word per feature dimension, chosen by the sign of the
/// cluster mean in that dimension, plus uniformly drawn noise words. Unseen
/// cluster means are mixtures of two seen means plus a perturbation, so text
/// learned on seen classes transfers.
struct SyntheticSpec {
  int num_classes = 20;
  int num_seen = 12;
  int num_unseen = 8;
  int feature_dim = 64;
  int samples_per_class = 60;
  double mean_spread = 1.0;          // std-dev of seen cluster mean coordinates
  double cov_scale = 0.6;            // overall within-class std-dev
  double cov_anisotropy = 8.0;       // ratio of largest to smallest covariance axis std-dev
  double unseen_perturbation = 0.1;  // std-dev added to mixed unseen means
  int num_modes = 2;                 // shared within-class modes; offsets sum to zero
  double mode_spread = 2.0;          // std-dev of mode offset coordinates
  int topic_vocab_size = 128;        // words indexed by (dimension, sign); 2*feature_dim is one word each
  int topic_words_per_class = 64;
  double noise_word_rate = 0.2;      // fraction of article tokens that are noise words, in [0, 1)
  int noise_vocab_size = 150;
  std::uint64_t seed = 7;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
};

void to_json(nlohmann::json& j, const SyntheticSpec& s);
/// Missing keys keep their defaults; unknown keys are rejected.
void from_json(const nlohmann::json& j, SyntheticSpec& s);

struct SyntheticDataset {
  DatasetBundle bundle;
  ad::Tensor cluster_means;      // one row per class, in class id order 0..C-1
  std::vector<double> axis_std;  // per-dimension within-class std-dev
};

SyntheticDataset generate_synthetic(const SyntheticSpec& spec);

/// Deterministic pseudo-word for an index. Words are lowercase, at least five
/// letters, not stop words, and fixed points of the Porter stemmer.
std::string synthetic_word(std::size_t index);

}  // namespace gazsl::data
