// Acceptance run: one PASS/FAIL line per headline criterion. The oracle
// criteria reuse the unit-test cases that pin them; the training criteria
// are measured here on the synthetic benchmark.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "gazsl/cli/commands.hpp"
#include "gazsl/data/synthetic.hpp"
#include "gazsl/eval/report.hpp"
#include "gazsl/gan/trainer.hpp"
#include "gazsl/text/stopwords.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

using namespace gazsl;
namespace fs = std::filesystem;

namespace {

// Tolerances and thresholds.
constexpr double kGradientBudgetSeconds = 120.0;
constexpr double kAblationMargin = 0.05;        // top-1, as a fraction
constexpr double kChanceMultiple = 4.0;         // full model vs 1/|U|
constexpr double kAblationBudgetSeconds = 900.0;
constexpr double kPivotDistanceDrop = 0.80;     // required relative decrease
constexpr double kConditioningShare = 0.80;     // other classes that must be farther
constexpr int kSteps = 500;
const std::vector<std::uint64_t> kSeeds{1, 2, 3};

// The FC comparison raises the noise rate to 0.8. The noise vocabulary is
// widened to 1000 words so that the 256 noise tokens per article do not cover
// every noise word; a word present in every article has idf 0 and TF-IDF
// would remove the noise before the FC layer sees it.
constexpr double kFcNoiseRate = 0.8;
constexpr int kFcNoiseVocabulary = 1000;

double cpu_seconds() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

struct Line {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<Line> g_lines;

void report(const std::string& name, bool pass, const std::string& detail) {
  g_lines.push_back({name, pass, detail});
  std::printf("%s  %-26s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

// Counts the test cases a doctest run executes, so an empty filter match
// cannot pass vacuously.
struct CaseCounter : doctest::IReporter {
  static inline int cases = 0;
  explicit CaseCounter(const doctest::ContextOptions&) {}
  void report_query(const doctest::QueryData&) override {}
  void test_run_start() override {}
  void test_run_end(const doctest::TestRunStats&) override {}
  void test_case_start(const doctest::TestCaseData&) override { ++cases; }
  void test_case_reenter(const doctest::TestCaseData&) override {}
  void test_case_end(const doctest::CurrentTestCaseStats&) override {}
  void test_case_exception(const doctest::TestCaseException&) override {}
  void subcase_start(const doctest::SubcaseSignature&) override {}
  void subcase_end() override {}
  void log_assert(const doctest::AssertData&) override {}
  void log_message(const doctest::MessageData&) override {}
  void test_case_skipped(const doctest::TestCaseData&) override {}
};
REGISTER_LISTENER("case_counter", 1, CaseCounter);

struct OracleRun {
  bool ok = false;
  int cases = 0;
  double cpu = 0.0;
};

/// Runs the named unit-test cases in-process.
OracleRun run_cases(const std::vector<std::string>& names) {
  std::string filter;
  for (const auto& n : names) filter += (filter.empty() ? "" : ",") + n;
  doctest::Context ctx;
  ctx.setOption("test-case", filter.c_str());
  ctx.setOption("minimal", true);
  ctx.setOption("no-version", true);
  ctx.setOption("no-intro", true);
  CaseCounter::cases = 0;
  const double start = cpu_seconds();
  const int rc = ctx.run();
  OracleRun r;
  r.cpu = cpu_seconds() - start;
  r.cases = CaseCounter::cases;
  r.ok = rc == 0 && r.cases == static_cast<int>(names.size());
  return r;
}

void oracle_criterion(const std::string& name, const std::vector<std::string>& cases) {
  const OracleRun r = run_cases(cases);
  report(name, r.ok, fmt("%.0f/%.0f oracle cases passed", r.ok ? r.cases : 0, static_cast<double>(cases.size())));
}

struct Trained {
  gan::GanModel model;
  double top1 = 0.0;
};

Trained train_and_score(const data::SyntheticDataset& syn, const gan::PreparedDataset& prepared,
                        gan::TrainConfig config, const text::Stoplist& stoplist) {
  Trained t;
  t.model = gan::train(prepared, config).model;
  const auto inputs = eval::prepare_eval(t.model, syn.bundle, stoplist);
  const auto bank = eval::build_bank(t.model, inputs, inputs.unseen_classes,
                                     static_cast<std::size_t>(t.model.config.synth_per_class), t.model.config.seed);
  t.top1 = eval::zsl_top1(bank, inputs, eval::NnMode::Instance);
  return t;
}

/// Share of unseen classes whose generated mean is closer to its own cluster
/// mean than to at least kConditioningShare of the other classes' means.
double conditioning_share(const gan::GanModel& model, const data::SyntheticDataset& syn,
                          const text::Stoplist& stoplist) {
  const auto inputs = eval::prepare_eval(model, syn.bundle, stoplist);
  const auto bank = eval::build_bank(model, inputs, inputs.unseen_classes,
                                     static_cast<std::size_t>(model.config.synth_per_class), model.config.seed);
  const ad::Tensor truth = model.scaler.transform(syn.cluster_means);
  const auto C = static_cast<Eigen::Index>(truth.rows());
  int good = 0;
  for (std::size_t i = 0; i < bank.num_classes(); ++i) {
    const int own = bank.class_ids()[i];
    const auto mean = bank.pivots().matrix().row(static_cast<Eigen::Index>(i));
    const double d_own = (mean - truth.matrix().row(own)).norm();
    int farther = 0;
    for (Eigen::Index c = 0; c < C; ++c) {
      if (c != own && (mean - truth.matrix().row(c)).norm() > d_own) ++farther;
    }
    if (farther >= kConditioningShare * static_cast<double>(C - 1)) ++good;
  }
  return static_cast<double>(good) / static_cast<double>(bank.num_classes());
}

gan::TrainConfig config_for(std::uint64_t seed) {
  gan::TrainConfig c;
  c.steps = kSteps;
  c.seed = seed;
  return c;
}

void training_criteria() {
  const auto stoplist = text::Stoplist::english();
  const double start = cpu_seconds();
  double full = 0.0, vp_only = 0.0, gan_only = 0.0;
  double worst_drop = 1.0;
  double conditioning = 0.0;
  std::size_t unseen = 0;
  for (std::uint64_t seed : kSeeds) {
    data::SyntheticSpec spec;
    spec.seed = seed;
    const auto syn = data::generate_synthetic(spec);
    const auto prepared = gan::prepare(syn.bundle, stoplist);
    unseen = syn.bundle.split.unseen.size();

    gan::TrainConfig config = config_for(seed);
    const double before = gan::mean_pivot_distance(gan::initialize_model(prepared.training, config),
                                                   prepared.training, 200, seed);
    const Trained f = train_and_score(syn, prepared, config, stoplist);
    const double after = gan::mean_pivot_distance(f.model, prepared.training, 200, seed);
    worst_drop = std::min(worst_drop, 1.0 - after / before);
    conditioning += conditioning_share(f.model, syn, stoplist) / static_cast<double>(kSeeds.size());
    full += f.top1 / static_cast<double>(kSeeds.size());

    config.ablation = gan::Ablation::VpOnly;
    vp_only += train_and_score(syn, prepared, config, stoplist).top1 / static_cast<double>(kSeeds.size());
    config.ablation = gan::Ablation::GanOnly;
    gan_only += train_and_score(syn, prepared, config, stoplist).top1 / static_cast<double>(kSeeds.size());
    std::fprintf(stderr, "ablation seed %llu done (%.0f s CPU)\n", static_cast<unsigned long long>(seed),
                 cpu_seconds() - start);
  }
  const double elapsed = cpu_seconds() - start;
  const double chance = 1.0 / static_cast<double>(unseen);
  const bool ordering = full - vp_only >= kAblationMargin && full - gan_only >= kAblationMargin &&
                        full >= kChanceMultiple * chance && elapsed < kAblationBudgetSeconds;
  report("ablation ordering", ordering,
         fmt("full %.3f  vp-only %.3f  gan-only %.3f  (%.0f s CPU)", full, vp_only, gan_only, elapsed));
  report("VP convergence", worst_drop >= kPivotDistanceDrop,
         fmt("smallest pivot-distance drop over seeds %.1f%%", 100.0 * worst_drop));
  report("conditioning (invariant)", conditioning == 1.0,
         fmt("unseen classes nearest their own cluster: %.1f%%", 100.0 * conditioning));

  double with_fc = 0.0, without_fc = 0.0;
  for (std::uint64_t seed : kSeeds) {
    data::SyntheticSpec spec;
    spec.seed = seed;
    spec.noise_word_rate = kFcNoiseRate;
    spec.noise_vocab_size = kFcNoiseVocabulary;
    const auto syn = data::generate_synthetic(spec);
    const auto prepared = gan::prepare(syn.bundle, stoplist);
    gan::TrainConfig config = config_for(seed);
    with_fc += train_and_score(syn, prepared, config, stoplist).top1 / static_cast<double>(kSeeds.size());
    config.text_fc = false;
    without_fc += train_and_score(syn, prepared, config, stoplist).top1 / static_cast<double>(kSeeds.size());
    std::fprintf(stderr, "fc seed %llu done\n", static_cast<unsigned long long>(seed));
  }
  report("FC ablation direction", with_fc >= without_fc, fmt("w/ FC %.3f  w/o FC %.3f", with_fc, without_fc));
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void determinism_criterion() {
  const fs::path dir = fs::temp_directory_path() / "gazsl_acceptance_determinism";
  fs::remove_all(dir);
  std::ostringstream log;
  cli::SynthdataOptions synth;
  synth.out_dir = dir / "data";
  cli::cmd_synthdata(synth, log);
  for (const char* name : {"a.json", "b.json"}) {
    cli::TrainCommandOptions train;
    train.data_dir = synth.out_dir;
    train.model_out = dir / name;
    train.config.steps = 100;
    train.quiet = true;
    cli::cmd_train(train, log);
  }
  const bool model_same = slurp(dir / "a.json") == slurp(dir / "b.json");
  const bool history_same = slurp(dir / "a.json.loss.csv") == slurp(dir / "b.json.loss.csv");
  report("determinism", model_same && history_same && !slurp(dir / "a.json").empty(),
         std::string("model ") + (model_same ? "identical" : "differs") + ", loss csv " +
             (history_same ? "identical" : "differs"));
  fs::remove_all(dir);
}

}  // namespace

int main() {
  {
    const OracleRun r = run_cases({"every primitive matches central differences",
                                   "gradients of gradients match central differences",
                                   "loss gradients match central differences"});
    report("gradient suite", r.ok && r.cpu < kGradientBudgetSeconds,
           fmt("%.0f/3 finite-difference cases passed in %.1f s CPU", r.ok ? r.cases : 0, r.cpu));
  }
  oracle_criterion("AUSUC oracle", {"AUSUC equals dense-grid enumeration on seeded toy problems",
                                    "triangle curve has area one half"});
  oracle_criterion("mAP oracle", {"average precision examples",
                                  "retrieval on a fixed ten-item gallery matches hand computation",
                                  "perfectly separated gallery gives mAP one at every ratio"});
  oracle_criterion("text oracle", {"porter matches the reference fixture",
                                   "tfidf on a five-document corpus matches hand computation"});
  try {
    determinism_criterion();
  } catch (const std::exception& e) {
    report("determinism", false, e.what());
  }
  try {
    training_criteria();
  } catch (const std::exception& e) {
    report("training criteria", false, e.what());
  }

  int failed = 0;
  for (const auto& l : g_lines) failed += l.pass ? 0 : 1;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(g_lines.size()) - failed, g_lines.size());
  return failed == 0 ? 0 : 1;
}
