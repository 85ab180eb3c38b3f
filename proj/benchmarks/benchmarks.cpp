#include "gazsl/autodiff/graph.hpp"
#include "gazsl/autodiff/ops.hpp"
#include "gazsl/data/synthetic.hpp"
#include "gazsl/eval/metrics.hpp"
#include "gazsl/eval/nearest.hpp"
#include "gazsl/gan/trainer.hpp"
#include "gazsl/text/porter.hpp"
#include "gazsl/text/stopwords.hpp"
#include "gazsl/text/tfidf.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <string>
#include <vector>

using namespace gazsl;

namespace {

ad::Tensor random_tensor(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ad::Tensor t(rows, cols);
  for (double& v : t.values()) v = n(rng);
  return t;
}

/// One hidden-layer critic's forward and backward pass on a batch.
void BM_MlpForwardBackward(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  const ad::Tensor x = random_tensor(batch, 64, rng);
  const ad::Tensor w1 = random_tensor(64, 256, rng);
  const ad::Tensor w2 = random_tensor(256, 1, rng);
  for (auto _ : state) {
    ad::Graph g;
    const ad::Var h = ad::relu(ad::matmul(g.constant(x), g.parameter(w1, "w1")));
    const ad::Var out = ad::mean(ad::matmul(h, g.parameter(w2, "w2")));
    benchmark::DoNotOptimize(g.backward(out));
  }
}
BENCHMARK(BM_MlpForwardBackward)->Arg(16)->Arg(64)->Arg(256);

/// Gradient-penalty style double backprop through a Leaky ReLU critic.
void BM_DoubleBackprop(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  const ad::Tensor x = random_tensor(batch, 64, rng);
  const ad::Tensor w1 = random_tensor(64, 256, rng);
  const ad::Tensor w2 = random_tensor(256, 1, rng);
  for (auto _ : state) {
    ad::Graph g;
    const ad::Var in = g.constant(x);
    const ad::Var score = ad::sum(ad::matmul(ad::leaky_relu(ad::matmul(in, g.parameter(w1, "w1")), 0.2),
                                             g.parameter(w2, "w2")));
    const ad::Var grad = g.input_gradient(score, in);
    const ad::Var penalty = ad::mean(ad::square(ad::affine(ad::row_norm(grad), 1.0, -1.0)));
    benchmark::DoNotOptimize(g.backward(penalty));
  }
}
BENCHMARK(BM_DoubleBackprop)->Arg(16)->Arg(64);

void BM_PorterStem(benchmark::State& state) {
  const std::vector<std::string> words{"generalization", "conditioning", "feathered", "happily", "relational",
                                       "hopefulness",    "ponies",       "agreed",    "sparrows", "university"};
  for (auto _ : state) {
    for (const auto& w : words) benchmark::DoNotOptimize(text::porter_stem(w));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * words.size()));
}
BENCHMARK(BM_PorterStem);

void BM_EncodeCorpus(benchmark::State& state) {
  const auto syn = data::generate_synthetic(data::SyntheticSpec{});
  std::vector<text::Document> seen, unseen;
  for (int c : syn.bundle.split.seen) seen.push_back(syn.bundle.documents.at(c));
  for (int c : syn.bundle.split.unseen) unseen.push_back(syn.bundle.documents.at(c));
  const auto stop = text::Stoplist::english();
  for (auto _ : state) benchmark::DoNotOptimize(text::encode_corpus(seen, unseen, stop));
}
BENCHMARK(BM_EncodeCorpus);

/// Ten outer training loops on the default synthetic benchmark.
void BM_TrainTenSteps(benchmark::State& state) {
  const auto syn = data::generate_synthetic(data::SyntheticSpec{});
  const auto prepared = gan::prepare(syn.bundle, text::Stoplist::english());
  gan::TrainConfig config;
  config.steps = 10;
  for (auto _ : state) benchmark::DoNotOptimize(gan::train(prepared, config));
}
BENCHMARK(BM_TrainTenSteps)->Unit(benchmark::kMillisecond);

void BM_ClassifyNearest(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::map<int, ad::Tensor> vectors;
  for (int c = 0; c < 8; ++c) vectors.emplace(c, random_tensor(60, 64, rng));
  const eval::SynthBank bank(std::move(vectors));
  const ad::Tensor queries = random_tensor(480, 64, rng);
  const auto mode = state.range(0) == 0 ? eval::NnMode::Instance : eval::NnMode::Pivot;
  state.SetLabel(eval::to_string(mode));
  for (auto _ : state) benchmark::DoNotOptimize(eval::classify_all(queries, bank, mode));
}
BENCHMARK(BM_ClassifyNearest)->Arg(0)->Arg(1);

void BM_GzslCurve(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::map<int, ad::Tensor> vectors;
  for (int c = 0; c < 20; ++c) vectors.emplace(c, random_tensor(1, 64, rng));
  const eval::SynthBank bank(std::move(vectors));
  const ad::Tensor seen_q = random_tensor(720, 64, rng);
  const ad::Tensor unseen_q = random_tensor(480, 64, rng);
  std::vector<int> seen_labels(720), unseen_labels(480);
  for (std::size_t i = 0; i < 720; ++i) seen_labels[i] = static_cast<int>(i % 12);
  for (std::size_t i = 0; i < 480; ++i) unseen_labels[i] = 12 + static_cast<int>(i % 8);
  const std::vector<int> seen{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  const auto scores = eval::gzsl_scores(seen_q, seen_labels, unseen_q, unseen_labels, bank, seen);
  const auto grid = eval::default_calibration_grid(scores);
  for (auto _ : state) benchmark::DoNotOptimize(eval::gzsl_curve(scores, grid));
}
BENCHMARK(BM_GzslCurve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
