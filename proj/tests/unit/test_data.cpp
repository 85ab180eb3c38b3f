#include "support.hpp"

#include "gazsl/data/dataset.hpp"
#include "gazsl/data/scaler.hpp"
#include "gazsl/data/synthetic.hpp"
#include "gazsl/error.hpp"
#include "gazsl/eval/metrics.hpp"
#include "gazsl/eval/nearest.hpp"
#include "gazsl/gan/trainer.hpp"
#include "gazsl/text/porter.hpp"
#include "gazsl/text/stopwords.hpp"

#include <Eigen/Cholesky>
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <set>
#include <string>

using namespace gazsl;
using gazsl::testing::random_tensor;
using gazsl::testing::scratch_dir;

namespace {

const std::filesystem::path kFixtures = GAZSL_FIXTURE_DIR;

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

data::SyntheticSpec small_spec() {
  data::SyntheticSpec s;
  s.num_classes = 6;
  s.num_seen = 4;
  s.num_unseen = 2;
  s.feature_dim = 8;
  s.samples_per_class = 5;
  s.topic_vocab_size = 16;
  s.topic_words_per_class = 8;
  return s;
}

}  // namespace

TEST_SUITE("data") {

TEST_CASE("four-class fixture loads") {
  const auto b = data::load_dataset(kFixtures / "dataset4");
  CHECK(b.size() == 8);
  CHECK(b.dim() == 3);
  CHECK(b.name == "dataset4");
  CHECK(b.split.seen == std::vector<int>{0, 1});
  CHECK(b.split.unseen == std::vector<int>{2, 3});
  CHECK(b.split.style == "SCS");
  CHECK(b.labels == std::vector<int>{0, 0, 1, 1, 2, 2, 3, 3});
  CHECK(b.features(3, 0) == 4.5);
  CHECK(b.documents.size() == 4);
  const int unseen[] = {2, 3};
  CHECK(b.instances_of(unseen) == std::vector<std::size_t>{4, 5, 6, 7});
}

TEST_CASE("overlapping split is rejected naming the class") {
  const std::string message = error_of([] { data::load_dataset(kFixtures / "overlap"); });
  CHECK(message.find("5") != std::string::npos);
  CHECK(message.find("disjoint") != std::string::npos);
  CHECK_THROWS_AS(data::load_dataset(kFixtures / "overlap"), ValidationError);
}

TEST_CASE("feature and label counts must agree") {
  const std::string message = error_of([] { data::load_dataset(kFixtures / "short_labels"); });
  CHECK(message.find("labels.csv") != std::string::npos);
  CHECK(message.find("7 labels") != std::string::npos);
}

TEST_CASE("missing document and stray label are rejected") {
  auto b = data::load_dataset(kFixtures / "dataset4");
  auto no_doc = b;
  no_doc.documents.erase(3);
  CHECK(error_of([&] { data::validate(no_doc); }).find("class 3") != std::string::npos);
  auto stray = b;
  stray.labels[0] = 9;
  CHECK_THROWS_AS(data::validate(stray), ValidationError);
  CHECK_THROWS_AS(data::load_dataset(kFixtures / "does_not_exist"), ValidationError);
}

TEST_CASE("malformed files report file and line") {
  const auto dir = scratch_dir("malformed");
  std::filesystem::copy(kFixtures / "dataset4", dir, std::filesystem::copy_options::recursive);
  std::ofstream(dir / "features.csv", std::ios::app) << "1.0,oops,2.0\n";
  const std::string message = error_of([&] { data::load_dataset(dir); });
  CHECK(message.find("features.csv") != std::string::npos);
  CHECK(message.find("9") != std::string::npos);
}

TEST_CASE("feature files round-trip in both formats") {
  std::mt19937_64 rng(81);
  const ad::Tensor t = random_tensor(7, 5, rng, -1e3, 1e3);
  const auto dir = scratch_dir("features");
  data::write_features_binary(t, dir / "f.bin");
  data::write_features_csv(t, dir / "f.csv");
  CHECK(data::read_features_binary(dir / "f.bin") == t);
  CHECK(data::read_features_csv(dir / "f.csv") == t);
  CHECK(std::filesystem::file_size(dir / "f.bin") == 16 + 7 * 5 * 8);
  std::ofstream(dir / "bad.bin", std::ios::binary) << "XXXX";
  CHECK_THROWS_AS(data::read_features_binary(dir / "bad.bin"), ValidationError);
}

TEST_CASE("scaler maps the fitted range onto the Tanh interval") {
  const ad::Tensor x = ad::Tensor::from_rows({{0.0, 3.0}, {5.0, 3.0}, {10.0, 3.0}});
  const auto scaler = data::FeatureScaler::fit(x);
  const ad::Tensor y = scaler.transform(x);
  CHECK(y(0, 0) == doctest::Approx(-0.95).epsilon(1e-15));
  CHECK(y(2, 0) == doctest::Approx(0.95).epsilon(1e-15));
  CHECK(y(1, 0) == doctest::Approx(0.0));
  CHECK(scaler.constant_dimensions() == std::vector<std::size_t>{1});
  CHECK(scaler.scale()[1] == 1.0);
  for (std::size_t r = 0; r < 3; ++r) CHECK(y(r, 1) == 0.0);
  CHECK_THROWS_AS(data::FeatureScaler::fit(ad::Tensor(0, 2)), ValidationError);
}

TEST_CASE("scaler clamps out-of-range values and counts them") {
  const auto scaler = data::FeatureScaler::fit(ad::Tensor::from_rows({{0.0}, {10.0}}));
  std::size_t clamped = 0;
  const ad::Tensor y = scaler.transform(ad::Tensor::from_rows({{-5.0}, {5.0}, {20.0}}), &clamped);
  CHECK(clamped == 2);
  CHECK(y(0, 0) == -data::FeatureScaler::kRange);
  CHECK(y(2, 0) == data::FeatureScaler::kRange);
}

TEST_CASE("scaler round trip on random data") {
  std::mt19937_64 rng(82);
  for (int trial = 0; trial < 100; ++trial) {
    const ad::Tensor x = random_tensor(12, 6, rng, -50.0, 50.0);
    const auto scaler = data::FeatureScaler::fit(x);
    for (double s : scaler.scale()) CHECK(s > 0.0);
    const ad::Tensor back = scaler.inverse(scaler.transform(x));
    CHECK((back.matrix() - x.matrix()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("synthetic spec validation") {
  data::SyntheticSpec s;
  s.num_seen = 11;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = data::SyntheticSpec{};
  s.noise_word_rate = 1.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  const nlohmann::json typo{{"num_clases", 3}};
  CHECK_THROWS_AS(typo.get<data::SyntheticSpec>(), ConfigError);
  const data::SyntheticSpec d{};
  const auto round = nlohmann::json(d).get<data::SyntheticSpec>();
  CHECK(nlohmann::json(round) == nlohmann::json(d));
}

TEST_CASE("synthetic words are distinct stemmer fixed points outside the stop list") {
  const auto stop = text::Stoplist::english();
  std::set<std::string> seen;
  for (std::size_t i = 0; i < 400; ++i) {
    const std::string w = data::synthetic_word(i);
    CHECK(w.size() >= 5);
    CHECK_FALSE(stop.contains(w));
    CHECK(text::porter_stem(w) == w);
    seen.insert(w);
  }
  CHECK(seen.size() == 400);
}

TEST_CASE("default synthetic benchmark is deterministic to the byte") {
  const data::SyntheticSpec spec{};
  CHECK(spec.num_classes == 20);
  CHECK(spec.feature_dim == 64);
  CHECK(spec.samples_per_class == 60);
  CHECK(spec.seed == 7);
  const auto a = scratch_dir("synth_a");
  const auto b = scratch_dir("synth_b");
  data::write_dataset(data::generate_synthetic(spec).bundle, a);
  data::write_dataset(data::generate_synthetic(spec).bundle, b);
  for (const auto& entry : std::filesystem::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), a);
    CAPTURE(rel.string());
    CHECK(slurp(entry.path()) == slurp(b / rel));
  }
}

TEST_CASE("noise-free articles depend only on the sign pattern") {
  // Two dimensions give four sign patterns, so ten classes must repeat some.
  data::SyntheticSpec s;
  s.num_classes = 10;
  s.num_seen = 6;
  s.num_unseen = 4;
  s.feature_dim = 2;
  s.topic_vocab_size = 4;
  s.topic_words_per_class = 6;
  s.noise_word_rate = 0.0;
  const auto syn = data::generate_synthetic(s);
  int identical_pairs = 0;
  for (int a = 0; a < 10; ++a) {
    for (int b = a + 1; b < 10; ++b) {
      const bool same_signs = (syn.cluster_means(a, 0) >= 0) == (syn.cluster_means(b, 0) >= 0) &&
                              (syn.cluster_means(a, 1) >= 0) == (syn.cluster_means(b, 1) >= 0);
      const bool same_doc = syn.bundle.documents.at(a).raw_text == syn.bundle.documents.at(b).raw_text;
      CHECK(same_signs == same_doc);
      identical_pairs += same_doc ? 1 : 0;
    }
  }
  CHECK(identical_pairs > 0);
}

TEST_CASE("per-class sample means recover the cluster means") {
  // Single mode, so each class is one Gaussian; the bound uses the total
  // standard deviation sqrt(trace of the covariance).
  data::SyntheticSpec s;
  s.num_modes = 1;
  for (std::uint64_t seed : {7, 8, 9}) {
    s.seed = seed;
    const auto syn = data::generate_synthetic(s);
    double trace = 0.0;
    for (double sd : syn.axis_std) trace += sd * sd;
    const double bound = 3.0 * std::sqrt(trace) / std::sqrt(static_cast<double>(s.samples_per_class));
    for (int c = 0; c < s.num_classes; ++c) {
      const int cls[] = {c};
      const auto rows = syn.bundle.instances_of(cls);
      const Eigen::RowVectorXd mean = syn.bundle.rows(rows).matrix().colwise().mean();
      CHECK((mean - syn.cluster_means.matrix().row(c)).norm() <= bound);
    }
  }
}

TEST_CASE("write then load is the identity") {
  for (auto format : {data::FeatureFormat::Binary, data::FeatureFormat::Csv}) {
    const auto original = data::generate_synthetic(small_spec()).bundle;
    const auto dir = scratch_dir("identity");
    data::write_dataset(original, dir, format);
    const auto loaded = data::load_dataset(dir);
    CHECK(loaded.name == original.name);
    CHECK(loaded.features == original.features);
    CHECK(loaded.labels == original.labels);
    CHECK(loaded.split.seen == original.split.seen);
    CHECK(loaded.split.unseen == original.split.unseen);
    CHECK(loaded.split.style == original.split.style);
    REQUIRE(loaded.documents.size() == original.documents.size());
    for (const auto& [c, doc] : original.documents) {
      CHECK(loaded.documents.at(c).class_id == doc.class_id);
      CHECK(loaded.documents.at(c).raw_text == doc.raw_text);
    }
  }
}

TEST_CASE("ridge regression from text to cluster means beats chance threefold") {
  // Dual-form ridge from seen-class TF-IDF rows to seen cluster means, then
  // pivot nearest neighbour on the unseen instances.
  const data::SyntheticSpec spec{};
  const auto syn = data::generate_synthetic(spec);
  const auto& b = syn.bundle;
  const auto prep = gan::prepare(b, text::Stoplist::english());
  const auto& seen = prep.seen_classes;
  Eigen::MatrixXd X(seen.size(), prep.training.class_text.cols());
  Eigen::MatrixXd Y(seen.size(), b.dim());
  for (std::size_t i = 0; i < seen.size(); ++i) {
    X.row(static_cast<Eigen::Index>(i)) = prep.text_of(seen[i]).matrix().row(0);
    Y.row(static_cast<Eigen::Index>(i)) = syn.cluster_means.matrix().row(seen[i]);
  }
  Eigen::MatrixXd K = X * X.transpose();
  K.diagonal().array() += 1.0;
  const Eigen::MatrixXd W = X.transpose() * K.ldlt().solve(Y);

  std::map<int, ad::Tensor> pivots;
  for (int c : b.split.unseen) pivots.emplace(c, ad::Tensor(ad::Matrix(prep.text_of(c).matrix() * W)));
  const eval::SynthBank bank(std::move(pivots));
  const auto rows = b.instances_of(b.split.unseen);
  const double acc = eval::top1_accuracy(eval::classify_all(b.rows(rows), bank, eval::NnMode::Pivot), b.labels_at(rows));
  CAPTURE(acc);
  CHECK(acc >= 3.0 / static_cast<double>(b.split.unseen.size()));
}

}  // TEST_SUITE
