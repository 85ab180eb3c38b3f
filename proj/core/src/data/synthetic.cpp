#include "gazsl/data/synthetic.hpp"

#include "gazsl/error.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace gazsl::data {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("synthetic spec: " + what);
}

// Sentence scaffolding; every entry is on the shipped stop-word list.
constexpr std::array<std::string_view, 6> kGlue{"the", "of", "and", "with", "its", "a"};

std::string render_article(const std::vector<std::string>& tokens) {
  std::string out;
  std::size_t in_sentence = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string word = tokens[i];
    if (in_sentence == 0) {
      word[0] = static_cast<char>(word[0] - 'a' + 'A');
    } else if (in_sentence % 3 == 0) {
      out += kGlue[i % kGlue.size()];
      out += ' ';
    }
    out += word;
    ++in_sentence;
    if (in_sentence == 8 || i + 1 == tokens.size()) {
      out += ".\n";
      in_sentence = 0;
    } else {
      out += (i % 5 == 4) ? ", " : " ";
    }
  }
  return out;
}

}  // namespace

void SyntheticSpec::validate() const {
  require(num_classes > 0, "num_classes must be positive");
  require(num_seen > 0, "num_seen must be positive");
  require(num_unseen > 0, "num_unseen must be positive");
  require(num_seen + num_unseen == num_classes,
          "num_seen + num_unseen (" + std::to_string(num_seen) + " + " + std::to_string(num_unseen) +
              ") must equal num_classes (" + std::to_string(num_classes) + ")");
  require(num_seen >= 2, "need at least two seen classes to mix unseen means");
  require(feature_dim > 0, "feature_dim must be positive");
  require(samples_per_class > 0, "samples_per_class must be positive");
  require(mean_spread > 0.0, "mean_spread must be positive");
  require(cov_scale > 0.0, "cov_scale must be positive");
  require(cov_anisotropy >= 1.0, "cov_anisotropy must be >= 1");
  require(unseen_perturbation >= 0.0, "unseen_perturbation must be non-negative");
  require(topic_vocab_size > 0, "topic_vocab_size must be positive");
  require(topic_words_per_class > 0, "topic_words_per_class must be positive");
  require(noise_word_rate >= 0.0 && noise_word_rate < 1.0, "noise_word_rate must lie in [0, 1)");
  require(noise_vocab_size > 0, "noise_vocab_size must be positive");
  require(num_modes >= 1, "num_modes must be >= 1");
  require(mode_spread >= 0.0, "mode_spread must be non-negative");
}

void to_json(nlohmann::json& j, const SyntheticSpec& s) {
  j = nlohmann::json{{"num_classes", s.num_classes},
                     {"num_seen", s.num_seen},
                     {"num_unseen", s.num_unseen},
                     {"feature_dim", s.feature_dim},
                     {"samples_per_class", s.samples_per_class},
                     {"mean_spread", s.mean_spread},
                     {"cov_scale", s.cov_scale},
                     {"cov_anisotropy", s.cov_anisotropy},
                     {"unseen_perturbation", s.unseen_perturbation},
                     {"num_modes", s.num_modes},
                     {"mode_spread", s.mode_spread},
                     {"topic_vocab_size", s.topic_vocab_size},
                     {"topic_words_per_class", s.topic_words_per_class},
                     {"noise_word_rate", s.noise_word_rate},
                     {"noise_vocab_size", s.noise_vocab_size},
                     {"seed", s.seed}};
}

void from_json(const nlohmann::json& j, SyntheticSpec& s) {
  if (!j.is_object()) throw ConfigError("synthetic spec: expected a JSON object");
  nlohmann::json defaults = s;
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw ConfigError("synthetic spec: unknown key '" + key + "'");
  }
  try {
    s.num_classes = j.value("num_classes", s.num_classes);
    s.num_seen = j.value("num_seen", s.num_seen);
    s.num_unseen = j.value("num_unseen", s.num_unseen);
    s.feature_dim = j.value("feature_dim", s.feature_dim);
    s.samples_per_class = j.value("samples_per_class", s.samples_per_class);
    s.mean_spread = j.value("mean_spread", s.mean_spread);
    s.cov_scale = j.value("cov_scale", s.cov_scale);
    s.cov_anisotropy = j.value("cov_anisotropy", s.cov_anisotropy);
    s.unseen_perturbation = j.value("unseen_perturbation", s.unseen_perturbation);
    s.num_modes = j.value("num_modes", s.num_modes);
    s.mode_spread = j.value("mode_spread", s.mode_spread);
    s.topic_vocab_size = j.value("topic_vocab_size", s.topic_vocab_size);
    s.topic_words_per_class = j.value("topic_words_per_class", s.topic_words_per_class);
    s.noise_word_rate = j.value("noise_word_rate", s.noise_word_rate);
    s.noise_vocab_size = j.value("noise_vocab_size", s.noise_vocab_size);
    s.seed = j.value("seed", s.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synthetic spec: ") + e.what());
  }
}

std::string synthetic_word(std::size_t index) {
  static constexpr std::string_view kOnset = "bdfgkmnprtvz";
  static constexpr std::string_view kVowel = "aou";
  static constexpr std::string_view kCoda = "bdkpmg";
  std::string w;
  std::size_t rest = index;
  w.push_back(kCoda[rest % kCoda.size()]);
  rest /= kCoda.size();
  // Syllables are prepended, so the ending (vowel + coda) never matches a
  // suffix rule of the stemmer.
  do {
    w.insert(w.begin(), kVowel[rest % kVowel.size()]);
    rest /= kVowel.size();
    w.insert(w.begin(), kOnset[rest % kOnset.size()]);
    rest /= kOnset.size();
  } while (rest > 0 || w.size() < 5);
  return w;
}

SyntheticDataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const auto C = static_cast<std::size_t>(spec.num_classes);
  const auto D = static_cast<std::size_t>(spec.feature_dim);
  const auto n_per = static_cast<std::size_t>(spec.samples_per_class);

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<int> ids(C);
  for (std::size_t c = 0; c < C; ++c) ids[c] = static_cast<int>(c);
  std::shuffle(ids.begin(), ids.end(), rng);
  std::vector<int> seen(ids.begin(), ids.begin() + spec.num_seen);
  std::vector<int> unseen(ids.begin() + spec.num_seen, ids.end());
  std::sort(seen.begin(), seen.end());
  std::sort(unseen.begin(), unseen.end());

  SyntheticDataset out;
  out.cluster_means = ad::Tensor(C, D);
  ad::Matrix& means = out.cluster_means.matrix();
  for (int c : seen) {
    for (std::size_t d = 0; d < D; ++d) means(c, static_cast<Eigen::Index>(d)) = spec.mean_spread * normal(rng);
  }
  std::uniform_int_distribution<std::size_t> pick_seen(0, seen.size() - 1);
  std::uniform_real_distribution<double> mix(0.25, 0.75);
  for (int c : unseen) {
    const int a = seen[pick_seen(rng)];
    int b = a;
    while (b == a) b = seen[pick_seen(rng)];
    const double w = mix(rng);
    // Rescale so mixed means keep the per-coordinate spread of seen means.
    const double norm = std::sqrt(w * w + (1.0 - w) * (1.0 - w));
    for (std::size_t d = 0; d < D; ++d) {
      const auto k = static_cast<Eigen::Index>(d);
      means(c, k) = (w * means(a, k) + (1.0 - w) * means(b, k)) / norm + spec.unseen_perturbation * normal(rng);
    }
  }

  // Shared covariance: random rotation of axis std-devs spaced geometrically
  // over [1/sqrt(r), sqrt(r)], rescaled to RMS cov_scale.
  ad::Matrix gauss(D, D);
  for (Eigen::Index i = 0; i < gauss.size(); ++i) gauss.data()[i] = normal(rng);
  const ad::Matrix rotation = Eigen::HouseholderQR<ad::Matrix>(gauss).householderQ();
  Eigen::VectorXd axis(D);
  for (std::size_t i = 0; i < D; ++i) {
    const double t = D == 1 ? 0.0 : 0.5 - static_cast<double>(i) / static_cast<double>(D - 1);
    axis(static_cast<Eigen::Index>(i)) = std::pow(spec.cov_anisotropy, t);
  }
  axis *= spec.cov_scale / std::sqrt(axis.squaredNorm() / static_cast<double>(D));
  const ad::Matrix transform = rotation * axis.asDiagonal();
  out.axis_std.resize(D);
  for (std::size_t d = 0; d < D; ++d) out.axis_std[d] = transform.row(static_cast<Eigen::Index>(d)).norm();

  // Mode offsets shared by every class, centred so each class keeps its
  // cluster mean as its expected feature.
  const auto K = static_cast<std::size_t>(spec.num_modes);
  ad::Matrix modes = ad::Matrix::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(D));
  if (K > 1) {
    for (Eigen::Index i = 0; i < modes.size(); ++i) modes.data()[i] = spec.mode_spread * normal(rng);
    modes.rowwise() -= modes.colwise().mean();
  }
  std::uniform_int_distribution<std::size_t> pick_mode(0, K - 1);

  DatasetBundle& b = out.bundle;
  b.name = "synthetic-c" + std::to_string(C) + "-d" + std::to_string(D) + "-s" + std::to_string(spec.seed);
  b.split = Split{seen, unseen, "SCS"};
  b.features = ad::Tensor(C * n_per, D);
  b.labels.reserve(C * n_per);
  Eigen::VectorXd eps(D);
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t i = 0; i < n_per; ++i) {
      for (std::size_t d = 0; d < D; ++d) eps(static_cast<Eigen::Index>(d)) = normal(rng);
      const auto mode = static_cast<Eigen::Index>(K > 1 ? pick_mode(rng) : 0);
      const auto row = static_cast<Eigen::Index>(c * n_per + i);
      b.features.matrix().row(row) =
          means.row(static_cast<Eigen::Index>(c)) + modes.row(mode) + (transform * eps).transpose();
      b.labels.push_back(static_cast<int>(c));
    }
  }

  const auto topic_vocab = static_cast<std::size_t>(spec.topic_vocab_size);
  const auto n_topic = static_cast<std::size_t>(spec.topic_words_per_class);
  const auto n_noise = static_cast<std::size_t>(
      std::lround(static_cast<double>(n_topic) * spec.noise_word_rate / (1.0 - spec.noise_word_rate)));
  std::uniform_int_distribution<std::size_t> pick_noise(0, static_cast<std::size_t>(spec.noise_vocab_size) - 1);
  for (std::size_t c = 0; c < C; ++c) {
    std::vector<std::string> tokens;
    tokens.reserve(n_topic + n_noise);
    for (std::size_t k = 0; k < n_topic; ++k) {
      const std::size_t d = k % D;
      const std::size_t sign_bit = means(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(d)) >= 0.0 ? 0 : 1;
      tokens.push_back(synthetic_word((2 * d + sign_bit) % topic_vocab));
    }
    for (std::size_t k = 0; k < n_noise; ++k) {
      std::uniform_int_distribution<std::size_t> where(0, tokens.size());
      const std::size_t pos = where(rng);
      tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(pos), synthetic_word(topic_vocab + pick_noise(rng)));
    }
    b.documents[static_cast<int>(c)] = text::Document{static_cast<int>(c), render_article(tokens)};
  }
  return out;
}

}  // namespace gazsl::data
