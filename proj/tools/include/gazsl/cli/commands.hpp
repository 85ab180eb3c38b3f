#pragma once

#include "gazsl/data/dataset.hpp"
#include "gazsl/data/synthetic.hpp"
#include "gazsl/eval/metrics.hpp"
#include "gazsl/eval/report.hpp"
#include "gazsl/gan/model.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gazsl::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,          // I/O and other unexpected errors
  kConfigError = 2,      // bad flags, config or dataset
  kNumericalError = 3,   // non-finite loss or gradient
};

/// Environment variable naming the default data directory.
inline constexpr const char* kDataRootEnv = "GAZSL_DATA_ROOT";

struct SynthdataOptions {
  data::SyntheticSpec spec;
  std::filesystem::path out_dir;
  data::FeatureFormat format = data::FeatureFormat::Binary;
  bool force = false;
};

struct TrainCommandOptions {
  std::filesystem::path data_dir;
  std::filesystem::path model_out;
  std::filesystem::path history_out;  // empty: <model_out>.loss.csv
  gan::TrainConfig config;
  std::optional<std::filesystem::path> stoplist;
  bool record_time = false;
  bool quiet = false;  // suppress progress lines
};

struct EvalOptions {
  std::filesystem::path model;
  std::filesystem::path data_dir;
  std::optional<std::filesystem::path> stoplist;
  std::vector<eval::NnMode> modes{eval::NnMode::Instance};
  int bank_per_class = 0;  // 0: the model's synth_per_class
  std::optional<std::uint64_t> bank_seed;  // default: the model's seed
  std::vector<double> ratios{0.25, 0.5, 1.0};
  bool dense_grid = false;
  std::filesystem::path report_out;  // empty: standard output
  std::filesystem::path csv_out;     // SUC curve or mAP table

  nlohmann::json resolved() const;
};

/// Writes a generated bundle. Refuses a non-empty directory unless forced.
void cmd_synthdata(const SynthdataOptions& options, std::ostream& log);

struct TrainSummary {
  std::size_t steps = 0;
  double final_loss_d = 0.0;
  double final_loss_g = 0.0;
  double final_loss_e = 0.0;
};
TrainSummary cmd_train(const TrainCommandOptions& options, std::ostream& log);

/// Zero-shot top-1 for every requested nearest-neighbour mode.
eval::EvalReport cmd_eval(const EvalOptions& options, std::ostream& out);
/// SUC curve and AUSUC over seen and unseen queries.
eval::EvalReport cmd_gzsl(const EvalOptions& options, std::ostream& out);
/// Retrieval mAP at each ratio.
eval::EvalReport cmd_retrieve(const EvalOptions& options, std::ostream& out);

/// Parses "0.25,0.5,1" into ratios; throws ConfigError on bad entries.
std::vector<double> parse_ratios(const std::string& text);

/// Full command line entry point: parses, dispatches and maps errors to exit
/// codes. Diagnostics go to `err`, machine output to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gazsl::cli
