#pragma once

#include "gazsl/autodiff/graph.hpp"
#include "gazsl/autodiff/tensor.hpp"
#include "gazsl/data/scaler.hpp"
#include "gazsl/text/tfidf.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace gazsl::gan {

enum class Ablation {
  None,     // full model
  GanOnly,  // visual-pivot weight forced to zero
  VpOnly,   // discriminator dropped; generator trained on the pivot loss alone
};

const char* to_string(Ablation a);
Ablation parse_ablation(const std::string& s);

struct TrainConfig {
  int n_d = 5;            // discriminator updates per loop
  int batch_size = 64;    // m, used for both real and generated batches
  int gen_per_label = 4;  // generated features per sampled class label in the generator step
  int steps = 500;        // N_step outer loops
  double alpha = 1e-3;
  double beta1 = 0.5;
  double beta2 = 0.9;
  double lambda_p = 1.0;  // visual-pivot weight
  double gp_coeff = 10.0; // gradient-penalty weight, applied once
  int z_dim = 100;
  int d_text = 0;         // text FC width; 0 picks a width from the vocabulary size
  int h_g = 256;
  int h_d = 256;
  double leaky_slope = 0.2;
  bool text_fc = true;    // false: text vector feeds the hidden layer directly
  Ablation ablation = Ablation::None;
  int synth_per_class = 60;  // evaluation bank size per class
  std::uint64_t seed = 1;

  /// Throws ConfigError.
  void validate() const;
  /// lambda_p after applying the ablation.
  double effective_lambda_p() const { return ablation == Ablation::GanOnly ? 0.0 : lambda_p; }
  bool uses_discriminator() const { return ablation != Ablation::VpOnly; }
};

/// Resolves d_text = 0 to a width scaled from the vocabulary size
/// (about 1000 for a 7.5k-term vocabulary, at least 32).
int resolve_text_width(int d_text, std::size_t vocab_size);

void to_json(nlohmann::json& j, const TrainConfig& c);
/// Missing keys keep defaults; unknown keys raise ConfigError.
void from_json(const nlohmann::json& j, TrainConfig& c);

/// Fully connected layer computing x W + b, W stored fan_in x fan_out.
struct Dense {
  ad::Tensor weight;
  ad::Tensor bias;
  std::size_t fan_in() const { return weight.rows(); }
  std::size_t fan_out() const { return weight.cols(); }
};

/// Uniform in [-s, s], s = sqrt(6 / (fan_in + fan_out)); zero bias.
Dense init_dense(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng);

struct GeneratorParams {
  std::optional<Dense> fc_text;  // absent for the "w/o FC" variant
  Dense fc_hidden;               // Leaky ReLU
  Dense fc_out;                  // Tanh
};

struct DiscriminatorParams {
  Dense fc_shared;  // ReLU
  Dense head_real;  // -> 1, unbounded critic score
  Dense head_cls;   // -> C seen-class logits
};

GeneratorParams init_generator(std::size_t text_dim, std::size_t feature_dim, const TrainConfig& config,
                               std::mt19937_64& rng);
DiscriminatorParams init_discriminator(std::size_t feature_dim, std::size_t num_classes, const TrainConfig& config,
                                       std::mt19937_64& rng);

/// (name, tensor) pairs in a fixed order, for the optimizer and serialization.
std::vector<std::pair<std::string, ad::Tensor*>> parameters(GeneratorParams& g);
std::vector<std::pair<std::string, ad::Tensor*>> parameters(DiscriminatorParams& d);

struct DenseVars {
  ad::Var weight;
  ad::Var bias;
};

struct GeneratorVars {
  std::optional<DenseVars> fc_text;
  DenseVars fc_hidden;
  DenseVars fc_out;
  double leaky_slope = 0.2;
};

struct DiscriminatorVars {
  DenseVars fc_shared;
  DenseVars head_real;
  DenseVars head_cls;
};

/// Puts the parameters on a graph, as trainable leaves or as constants.
GeneratorVars bind(ad::Graph& graph, const GeneratorParams& g, double leaky_slope, bool trainable);
DiscriminatorVars bind(ad::Graph& graph, const DiscriminatorParams& d, bool trainable);

/// Batch of text rows [n x T] and noise rows [n x Z] -> features [n x X].
ad::Var generator_graph(const GeneratorVars& g, ad::Var text, ad::Var noise);

struct CriticOutput {
  ad::Var score;   // [n x 1]
  ad::Var logits;  // [n x C]
};
CriticOutput discriminator_graph(const DiscriminatorVars& d, ad::Var features);

/// Graph-free evaluation helpers.
ad::Tensor generator_forward(const GeneratorParams& g, const ad::Tensor& text, const ad::Tensor& noise,
                             double leaky_slope);
ad::Tensor generator_forward(const GeneratorParams& g, const text::TfIdfVector& text, std::span<const double> noise,
                             double leaky_slope);
std::pair<ad::Tensor, ad::Tensor> discriminator_forward(const DiscriminatorParams& d, const ad::Tensor& features);

/// Trained generator and discriminator with everything needed to evaluate.
struct GanModel {
  TrainConfig config;
  std::size_t text_dim = 0;
  std::size_t feature_dim = 0;
  std::vector<int> seen_classes;  // classifier head index -> class id
  GeneratorParams generator;
  DiscriminatorParams discriminator;
  data::FeatureScaler scaler;
  std::string vocabulary_digest;
  std::string run_digest;  // digest of the resolved config plus training inputs
};

}  // namespace gazsl::gan
