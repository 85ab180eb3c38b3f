#include "gazsl/gan/trainer.hpp"

#include "gazsl/autodiff/adam.hpp"
#include "gazsl/autodiff/ops.hpp"
#include "gazsl/error.hpp"
#include "gazsl/gan/losses.hpp"
#include "gazsl/util/hash.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>

namespace gazsl::gan {
namespace {

// Offsets the batch/noise stream away from the initialization stream.
constexpr std::uint64_t kTrainStreamSalt = 0x9e3779b97f4a7c15ULL;

ad::Tensor dense_row(const text::TfIdfVector& v) {
  ad::Tensor row(1, v.dimension);
  for (const auto& [index, weight] : v.entries) row(0, index) = weight;
  return row;
}

void hash_tensor(util::Fnv1a& h, const ad::Tensor& t) {
  h.update(static_cast<std::uint64_t>(t.rows()));
  h.update(static_cast<std::uint64_t>(t.cols()));
  for (double v : t.values()) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    h.update(bits);
  }
}

std::string input_digest(const data::DatasetBundle& bundle, const text::Stoplist& stoplist) {
  util::Fnv1a h;
  hash_tensor(h, bundle.features);
  for (int label : bundle.labels) h.update(static_cast<std::uint64_t>(static_cast<std::int64_t>(label)));
  for (const auto& [id, doc] : bundle.documents) {
    h.update(static_cast<std::uint64_t>(static_cast<std::int64_t>(id)));
    h.update(static_cast<std::uint64_t>(doc.raw_text.size()));
    h.update(doc.raw_text);
  }
  h.update(std::string_view("seen"));
  for (int c : bundle.split.seen) h.update(static_cast<std::uint64_t>(static_cast<std::int64_t>(c)));
  h.update(std::string_view("unseen"));
  for (int c : bundle.split.unseen) h.update(static_cast<std::uint64_t>(static_cast<std::int64_t>(c)));
  for (const auto& w : stoplist.words()) {
    h.update(w);
    h.update(std::string_view("\n"));
  }
  return h.hex();
}

/// Adam state plus the flattened parameter list of one network.
struct Optimizer {
  std::vector<std::pair<std::string, ad::Tensor*>> named;
  std::vector<std::string> names;
  ad::AdamState state;

  template <typename Params>
  Optimizer(Params& params, const ad::AdamConfig& config) : named(parameters(params)) {
    for (const auto& [name, t] : named) names.push_back(name);
    state.config = config;
  }

  void step(const ad::Gradients& grads) {
    std::vector<ad::Tensor> values;
    std::vector<ad::Tensor> g;
    values.reserve(named.size());
    g.reserve(named.size());
    for (const auto& [name, t] : named) {
      values.push_back(std::move(*t));
      g.push_back(grads[name]);
    }
    try {
      ad::adam_step(values, g, names, state);
    } catch (...) {
      for (std::size_t i = 0; i < named.size(); ++i) *named[i].second = std::move(values[i]);
      throw;
    }
    for (std::size_t i = 0; i < named.size(); ++i) *named[i].second = std::move(values[i]);
  }
};

double checked(double value, int step, const char* name) {
  if (!std::isfinite(value)) {
    throw NumericalError("training diverged at step " + std::to_string(step) + ": " + name + " = " +
                         std::to_string(value));
  }
  return value;
}

/// Row indices and class labels of a uniformly sampled real minibatch.
struct Batch {
  std::vector<std::size_t> rows;
  std::vector<int> labels;
};

Batch sample_batch(const TrainingData& data, std::size_t m, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, data.labels.size() - 1);
  Batch b;
  b.rows.reserve(m);
  b.labels.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t r = pick(rng);
    b.rows.push_back(r);
    b.labels.push_back(data.labels[r]);
  }
  return b;
}

ad::Tensor gather_rows(const ad::Tensor& source, std::span<const std::size_t> rows) {
  ad::Tensor out(rows.size(), source.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.matrix().row(static_cast<Eigen::Index>(i)) = source.matrix().row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

ad::Tensor text_rows(const TrainingData& data, std::span<const int> labels) {
  ad::Tensor out(labels.size(), data.class_text.cols());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out.matrix().row(static_cast<Eigen::Index>(i)) = data.class_text.matrix().row(labels[i]);
  }
  return out;
}

ad::Tensor noise_rows(std::size_t n, std::size_t z_dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ad::Tensor z(n, z_dim);
  for (double& v : z.values()) v = normal(rng);
  return z;
}

}  // namespace

void TrainingData::validate() const {
  if (features.rows() == 0) throw ValidationError("training data: no training instances");
  if (features.rows() != labels.size()) {
    throw ValidationError("training data: " + std::to_string(features.rows()) + " feature rows vs " +
                          std::to_string(labels.size()) + " labels");
  }
  const std::size_t c = num_classes();
  if (c == 0) throw ValidationError("training data: no classes");
  for (int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= c) {
      throw ValidationError("training data: label " + std::to_string(label) + " outside [0, " + std::to_string(c) +
                            ")");
    }
  }
  if (pivots.centroids.cols() != features.cols()) {
    throw ShapeError("training data: pivots " + ad::shape_string(pivots.centroids) + " vs features " +
                     ad::shape_string(features));
  }
  if (!features.all_finite() || !class_text.all_finite() || !pivots.centroids.all_finite()) {
    throw ValidationError("training data: non-finite values");
  }
}

ad::Tensor PreparedDataset::text_of(int class_id) const {
  for (std::size_t i = 0; i < corpus.class_ids.size(); ++i) {
    if (corpus.class_ids[i] == class_id) return dense_row(corpus.vectors[i]);
  }
  throw ValidationError("no text vector for class " + std::to_string(class_id));
}

PreparedDataset prepare(const data::DatasetBundle& bundle, const text::Stoplist& stoplist) {
  data::validate(bundle);
  PreparedDataset out;
  out.seen_classes = bundle.split.seen;
  std::sort(out.seen_classes.begin(), out.seen_classes.end());
  if (out.seen_classes.empty()) throw ValidationError("split: no seen classes");

  const std::vector<std::size_t> rows = bundle.instances_of(out.seen_classes);
  if (rows.empty()) throw ValidationError("dataset has no instances of seen classes");
  const ad::Tensor raw = bundle.rows(rows);
  out.scaler = data::FeatureScaler::fit(raw);

  TrainingData& t = out.training;
  t.features = out.scaler.transform(raw);
  for (int class_id : bundle.labels_at(rows)) {
    const auto it = std::lower_bound(out.seen_classes.begin(), out.seen_classes.end(), class_id);
    t.labels.push_back(static_cast<int>(it - out.seen_classes.begin()));
  }

  std::vector<int> unseen = bundle.split.unseen;
  std::sort(unseen.begin(), unseen.end());
  const std::vector<text::Document> seen_docs = bundle.documents_of(out.seen_classes);
  const std::vector<text::Document> unseen_docs = bundle.documents_of(unseen);
  out.corpus = text::encode_corpus(seen_docs, unseen_docs, stoplist);

  t.class_text = ad::Tensor(out.seen_classes.size(), out.corpus.vocabulary.size());
  for (std::size_t i = 0; i < out.seen_classes.size(); ++i) {
    t.class_text.matrix().row(static_cast<Eigen::Index>(i)) =
        dense_row(out.corpus.vectors[i]).matrix().row(0);
  }

  std::vector<int> indices(out.seen_classes.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = static_cast<int>(i);
  PivotResult pivots = compute_visual_pivots(t.features, t.labels, indices);
  if (!pivots.empty_classes.empty()) {
    throw ValidationError("seen class " + std::to_string(out.seen_classes[pivots.empty_classes.front()]) +
                          " has no training instances");
  }
  t.pivots = std::move(pivots.pivots);
  out.input_digest = input_digest(bundle, stoplist);
  return out;
}

GanModel initialize_model(const TrainingData& data, const TrainConfig& config) {
  config.validate();
  data.validate();
  GanModel model;
  model.config = config;
  model.text_dim = data.class_text.cols();
  model.feature_dim = data.features.cols();
  // Class indices stand in for ids until a dataset supplies the real ones.
  model.seen_classes = data.pivots.class_ids;
  std::mt19937_64 rng(config.seed);
  model.generator = init_generator(model.text_dim, model.feature_dim, config, rng);
  model.discriminator = init_discriminator(model.feature_dim, data.num_classes(), config, rng);
  return model;
}

TrainResult train(const TrainingData& data, const TrainConfig& config, const TrainOptions& options) {
  TrainResult result;
  result.model = initialize_model(data, config);
  GanModel& model = result.model;

  const ad::AdamConfig adam{config.alpha, config.beta1, config.beta2, 1e-8};
  Optimizer g_opt(model.generator, adam);
  Optimizer d_opt(model.discriminator, adam);

  std::mt19937_64 rng(config.seed ^ kTrainStreamSalt);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto m = static_cast<std::size_t>(config.batch_size);
  const auto z_dim = static_cast<std::size_t>(config.z_dim);
  const double lambda_p = config.effective_lambda_p();

  result.history.reserve(static_cast<std::size_t>(config.steps));
  for (int step = 1; step <= config.steps; ++step) {
    const auto started = std::chrono::steady_clock::now();
    LossRecord record;
    record.step = step;

    if (config.uses_discriminator()) {
      double loss_d_sum = 0.0;
      for (int k = 0; k < config.n_d; ++k) {
        const Batch batch = sample_batch(data, m, rng);
        const ad::Tensor fake = generator_forward(model.generator, text_rows(data, batch.labels),
                                                  noise_rows(m, z_dim, rng), config.leaky_slope);
        std::vector<double> mix(m);
        for (double& e : mix) e = unit(rng);

        ad::Graph graph;
        const DiscriminatorVars d = bind(graph, model.discriminator, true);
        const DiscriminatorLoss loss =
            discriminator_loss(d, graph.constant(gather_rows(data.features, batch.rows)), graph.constant(fake),
                               batch.labels, mix, config.gp_coeff);
        loss_d_sum += checked(loss.total.value().item(), step, "L_D");
        d_opt.step(graph.backward(loss.total));
        ++result.discriminator_updates;
      }
      record.loss_d = loss_d_sum / static_cast<double>(config.n_d);
    }

    const Batch sampled = sample_batch(data, m, rng);
    std::vector<int> labels;
    labels.reserve(m * static_cast<std::size_t>(config.gen_per_label));
    for (int label : sampled.labels) labels.insert(labels.end(), static_cast<std::size_t>(config.gen_per_label), label);
    ad::Graph graph;
    const GeneratorVars g = bind(graph, model.generator, config.leaky_slope, true);
    const ad::Var fake = generator_graph(g, graph.constant(text_rows(data, labels)),
                                         graph.constant(noise_rows(labels.size(), z_dim, rng)));
    const ad::Var loss_e = vp_loss(fake, labels, data.pivots);
    ad::Var total = ad::scale(loss_e, lambda_p);
    if (config.uses_discriminator()) {
      const CriticOutput critic = discriminator_graph(bind(graph, model.discriminator, false), fake);
      const ad::Var loss_g = generator_loss(critic.score, critic.logits, labels);
      record.loss_g = checked(loss_g.value().item(), step, "L_G");
      total = loss_g + total;
    }
    record.loss_e = checked(loss_e.value().item(), step, "L_e");
    g_opt.step(graph.backward(total));
    ++result.generator_updates;

    if (options.record_wall_time) {
      record.wall_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    }
    result.history.push_back(record);
    if (options.on_step) options.on_step(record);
  }
  return result;
}

TrainResult train(const PreparedDataset& prepared, const TrainConfig& config, const TrainOptions& options) {
  TrainResult result = train(prepared.training, config, options);
  GanModel& model = result.model;
  model.seen_classes = prepared.seen_classes;
  model.scaler = prepared.scaler;
  model.vocabulary_digest = prepared.corpus.vocabulary.digest();
  util::Fnv1a h;
  h.update(nlohmann::json(config).dump());
  h.update(prepared.input_digest);
  model.run_digest = h.hex();
  return result;
}

ad::Tensor sample_noise(std::size_t n, std::size_t z_dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return noise_rows(n, z_dim, rng);
}

ad::Tensor synthesize_features(const GanModel& model, const ad::Tensor& text_row, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ValidationError("synthesize_features: n must be >= 1");
  if (text_row.rows() != 1) throw ShapeError("synthesize_features: expected one text row, got " + ad::shape_string(text_row));
  ad::Tensor text(n, text_row.cols());
  text.matrix().rowwise() = text_row.matrix().row(0);
  return generator_forward(model.generator, text, sample_noise(n, static_cast<std::size_t>(model.config.z_dim), seed),
                           model.config.leaky_slope);
}

double mean_pivot_distance(const GanModel& model, const TrainingData& data, std::size_t samples_per_class,
                           std::uint64_t seed) {
  const std::size_t c = data.num_classes();
  double total = 0.0;
  for (std::size_t k = 0; k < c; ++k) {
    ad::Tensor text(1, data.class_text.cols());
    text.matrix().row(0) = data.class_text.matrix().row(static_cast<Eigen::Index>(k));
    const ad::Tensor generated = synthesize_features(model, text, samples_per_class, seed + k);
    const Eigen::RowVectorXd mean = generated.matrix().colwise().mean();
    const std::ptrdiff_t p = data.pivots.row_of(static_cast<int>(k));
    total += (mean - data.pivots.centroids.matrix().row(p)).norm();
  }
  return total / static_cast<double>(c);
}

}  // namespace gazsl::gan
