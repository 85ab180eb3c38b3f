#include "gazsl/cli/commands.hpp"

#include "gazsl/error.hpp"
#include "gazsl/gan/artifact.hpp"
#include "gazsl/gan/trainer.hpp"
#include "gazsl/text/stopwords.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace gazsl::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kProgressEvery = 50;

text::Stoplist load_stoplist(const std::optional<fs::path>& path) {
  return path ? text::Stoplist::load(*path) : text::Stoplist::english();
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
}

/// Section of a config file, or an empty object when absent.
json section(const json& config, const char* name) {
  if (!config.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, value] : config.items()) {
    if (key != "synthetic" && key != "train" && key != "eval") {
      throw ConfigError("config file: unknown section '" + key + "' (expected synthetic, train or eval)");
    }
  }
  return config.contains(name) ? config.at(name) : json::object();
}

fs::path resolve_data_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kDataRootEnv); env != nullptr && *env != '\0') return env;
  throw ConfigError(std::string("no data directory: pass --data or set ") + kDataRootEnv);
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_report(const eval::EvalReport& report, const EvalOptions& options, std::ostream& out) {
  if (options.report_out.empty()) {
    report.validate();
    out << json(report).dump(2) << '\n';
  } else {
    eval::write_report(report, options.report_out);
  }
}

struct EvalSession {
  gan::GanModel model;
  data::DatasetBundle bundle;
  eval::EvalInputs inputs;
  std::size_t per_class = 0;
  std::uint64_t seed = 0;
  eval::EvalReport report;
};

EvalSession open_session(const EvalOptions& options) {
  EvalSession s;
  s.model = gan::load_model(options.model);
  s.bundle = data::load_dataset(options.data_dir);
  s.inputs = eval::prepare_eval(s.model, s.bundle, load_stoplist(options.stoplist));
  s.per_class = static_cast<std::size_t>(options.bank_per_class > 0 ? options.bank_per_class
                                                                     : s.model.config.synth_per_class);
  s.seed = options.bank_seed.value_or(s.model.config.seed);
  s.report = eval::make_report(s.model, s.bundle, s.inputs, s.per_class);
  s.report.config = json{{"model", s.model.config}, {"eval", options.resolved()}};
  s.report.config["eval"]["bank_per_class"] = s.per_class;
  s.report.config["eval"]["bank_seed"] = s.seed;
  return s;
}

void apply_eval_section(const json& j, EvalOptions& o) {
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "nn_mode") {
        const auto mode = value.get<std::string>();
        o.modes = mode == "both" ? std::vector<eval::NnMode>{eval::NnMode::Instance, eval::NnMode::Pivot}
                                 : std::vector<eval::NnMode>{eval::parse_nn_mode(mode)};
      } else if (key == "bank_per_class") {
        o.bank_per_class = value.get<int>();
      } else if (key == "bank_seed") {
        o.bank_seed = value.get<std::uint64_t>();
      } else if (key == "ratios") {
        o.ratios = value.get<std::vector<double>>();
      } else if (key == "dense_grid") {
        o.dense_grid = value.get<bool>();
      } else {
        throw ConfigError("eval config: unknown key '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw ConfigError("eval config: " + key + ": " + e.what());
    }
  }
}

}  // namespace

json EvalOptions::resolved() const {
  json modes_json = json::array();
  for (eval::NnMode m : modes) modes_json.push_back(eval::to_string(m));
  json j{{"nn_modes", modes_json}, {"bank_per_class", bank_per_class}, {"ratios", ratios}, {"dense_grid", dense_grid}};
  j["bank_seed"] = bank_seed ? json(*bank_seed) : json(nullptr);
  return j;
}

std::vector<double> parse_ratios(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("--ratios: '" + item + "' is not a number");
    }
    if (used != item.size()) throw ConfigError("--ratios: '" + item + "' is not a number");
    if (!(v > 0.0 && v <= 1.0)) throw ConfigError("--ratios: " + item + " outside (0, 1]");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--ratios: no ratios given");
  return out;
}

void cmd_synthdata(const SynthdataOptions& options, std::ostream& log) {
  options.spec.validate();
  const fs::path& dir = options.out_dir;
  if (fs::exists(dir) && !fs::is_directory(dir)) throw ConfigError(dir.string() + " exists and is not a directory");
  if (fs::exists(dir) && !fs::is_empty(dir)) {
    if (!options.force) throw ConfigError("output directory " + dir.string() + " is not empty; pass --force to overwrite");
    // Only the files a bundle consists of are replaced.
    for (const char* name : {"features.bin", "features.csv", "labels.csv", "split.json", "spec.json"}) {
      fs::remove(dir / name);
    }
    fs::remove_all(dir / "docs");
  }
  const data::SyntheticDataset synthetic = data::generate_synthetic(options.spec);
  data::write_dataset(synthetic.bundle, dir, options.format);
  std::ofstream spec_out(dir / "spec.json", std::ios::binary | std::ios::trunc);
  spec_out << json(options.spec).dump(2) << '\n';
  if (!spec_out) throw Error("failed writing " + (dir / "spec.json").string());
  log << "wrote " << synthetic.bundle.name << ": " << synthetic.bundle.size() << " instances, "
      << synthetic.bundle.split.seen.size() << " seen / " << synthetic.bundle.split.unseen.size()
      << " unseen classes -> " << dir.string() << '\n';
}

TrainSummary cmd_train(const TrainCommandOptions& options, std::ostream& log) {
  options.config.validate();
  const data::DatasetBundle bundle = data::load_dataset(options.data_dir);
  const gan::PreparedDataset prepared = gan::prepare(bundle, load_stoplist(options.stoplist));
  for (int c : prepared.corpus.zero_vector_classes) {
    log << "warning: class " << c << " has an all-zero text vector\n";
  }
  for (std::size_t d : prepared.scaler.constant_dimensions()) {
    log << "warning: feature dimension " << d << " is constant over seen classes\n";
  }

  gan::TrainOptions train_options;
  train_options.record_wall_time = options.record_time;
  const int total = options.config.steps;
  if (!options.quiet) {
    train_options.on_step = [&log, total](const gan::LossRecord& r) {
      if (r.step % kProgressEvery == 0 || r.step == total) {
        log << "step " << r.step << "/" << total << "  L_D=" << r.loss_d << "  L_G=" << r.loss_g
            << "  L_e=" << r.loss_e << '\n';
      }
    };
  }
  const gan::TrainResult result = gan::train(prepared, options.config, train_options);

  gan::save_model(result.model, options.model_out);
  fs::path history = options.history_out;
  if (history.empty()) history = fs::path(options.model_out.string() + ".loss.csv");
  gan::write_loss_csv(result.history, options.config, history);
  log << "wrote model " << options.model_out.string() << " and history " << history.string() << '\n';

  TrainSummary summary;
  summary.steps = result.history.size();
  if (!result.history.empty()) {
    summary.final_loss_d = result.history.back().loss_d;
    summary.final_loss_g = result.history.back().loss_g;
    summary.final_loss_e = result.history.back().loss_e;
  }
  return summary;
}

eval::EvalReport cmd_eval(const EvalOptions& options, std::ostream& out) {
  if (options.modes.empty()) throw ConfigError("eval: no nearest-neighbour mode selected");
  EvalSession s = open_session(options);
  const eval::SynthBank bank = eval::build_bank(s.model, s.inputs, s.inputs.unseen_classes, s.per_class, s.seed);
  for (eval::NnMode mode : options.modes) {
    s.report.top1[std::string("unseen_") + eval::to_string(mode)] = eval::zsl_top1(bank, s.inputs, mode);
  }
  emit_report(s.report, options, out);
  return s.report;
}

eval::EvalReport cmd_gzsl(const EvalOptions& options, std::ostream& out) {
  EvalSession s = open_session(options);
  std::vector<int> all = s.inputs.seen_classes;
  all.insert(all.end(), s.inputs.unseen_classes.begin(), s.inputs.unseen_classes.end());
  const eval::SynthBank bank = eval::build_bank(s.model, s.inputs, all, s.per_class, s.seed);
  const eval::SucCurve curve = eval::gzsl_eval(bank, s.inputs, options.dense_grid);
  s.report.ausuc = curve.ausuc;
  if (!options.csv_out.empty()) eval::write_suc_csv(curve, options.csv_out);
  emit_report(s.report, options, out);
  return s.report;
}

eval::EvalReport cmd_retrieve(const EvalOptions& options, std::ostream& out) {
  if (options.ratios.empty()) throw ConfigError("retrieve: no ratios given");
  for (double r : options.ratios) {
    if (!(r > 0.0 && r <= 1.0)) throw ConfigError("retrieve: ratio " + format_value(r) + " outside (0, 1]");
  }
  EvalSession s = open_session(options);
  const eval::SynthBank bank = eval::build_bank(s.model, s.inputs, s.inputs.unseen_classes, s.per_class, s.seed);
  std::vector<eval::RetrievalResult> results;
  for (double r : options.ratios) {
    results.push_back(eval::retrieval_eval(bank, s.inputs, r));
    s.report.map_at[eval::format_ratio(r)] = results.back().mean_ap;
  }
  if (!options.csv_out.empty()) {
    std::ofstream csv(options.csv_out, std::ios::binary | std::ios::trunc);
    if (!csv) throw Error("cannot write " + options.csv_out.string());
    csv << "class_id";
    for (double r : options.ratios) csv << ',' << eval::format_ratio(r);
    csv << '\n';
    for (int c : bank.class_ids()) {
      csv << c;
      for (const auto& res : results) csv << ',' << format_value(res.average_precision.at(c));
      csv << '\n';
    }
    csv << "mean";
    for (const auto& res : results) csv << ',' << format_value(res.mean_ap);
    csv << '\n';
  }
  emit_report(s.report, options, out);
  return s.report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-shot learning with a text-conditioned feature GAN"};
  app.require_subcommand(1);
  std::string config_file;
  app.add_option("--config", config_file, "JSON config with optional synthetic/train/eval sections");

  // synthdata
  auto* synth = app.add_subcommand("synthdata", "Generate the synthetic benchmark dataset");
  std::string synth_out;
  std::optional<std::uint64_t> synth_seed;
  bool synth_force = false;
  bool synth_csv = false;
  std::string spec_file;
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--spec", spec_file, "JSON synthetic spec (overrides the config's synthetic section)");
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_flag("--force", synth_force, "Overwrite a non-empty output directory");
  synth->add_flag("--csv", synth_csv, "Write features.csv instead of features.bin");

  // train
  auto* train = app.add_subcommand("train", "Train the generator and discriminator");
  std::string train_data;
  std::string model_out;
  std::string history_out;
  std::string train_stoplist;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  std::optional<double> lambda_p;
  std::optional<double> gp_coeff;
  std::optional<int> z_dim;
  std::optional<std::string> ablation;
  bool no_text_fc = false;
  bool record_time = false;
  bool quiet = false;
  train->add_option("--data", train_data, std::string("Dataset directory (default: $") + kDataRootEnv + ")");
  train->add_option("--out", model_out, "Model artifact path")->required();
  train->add_option("--history", history_out, "Loss history CSV (default: <out>.loss.csv)");
  train->add_option("--stoplist", train_stoplist, "Stop-word file (default: shipped English list)");
  train->add_option("--seed", seed, "Training seed");
  train->add_option("--steps", steps, "Outer training loops");
  train->add_option("--lambda-p", lambda_p, "Visual-pivot weight");
  train->add_option("--gp-coeff", gp_coeff, "Gradient-penalty weight");
  train->add_option("--z-dim", z_dim, "Noise dimension");
  train->add_option("--ablation", ablation, "none, gan-only or vp-only");
  train->add_flag("--no-text-fc", no_text_fc, "Feed the text vector to the hidden layer directly");
  train->add_flag("--record-time", record_time, "Fill the wall_ms column (history is then not reproducible)");
  train->add_flag("--quiet", quiet, "No progress lines");

  // eval-like subcommands share their options
  struct EvalFlags {
    std::string model, data, stoplist, out, csv;
    int bank_size = 0;
    std::optional<std::uint64_t> bank_seed;
  };
  EvalFlags ef;
  std::string nn_mode;
  std::string ratios;
  bool dense_grid = false;
  auto add_eval_flags = [&ef](CLI::App* cmd) {
    cmd->add_option("--model", ef.model, "Model artifact")->required();
    cmd->add_option("--data", ef.data, std::string("Dataset directory (default: $") + kDataRootEnv + ")");
    cmd->add_option("--stoplist", ef.stoplist, "Stop-word file used at training time");
    cmd->add_option("--bank-size", ef.bank_size, "Synthesized features per class (default: model setting)");
    cmd->add_option("--bank-seed", ef.bank_seed, "Seed for the synthesized bank (default: model seed)");
    cmd->add_option("--out", ef.out, "Report JSON path (default: standard output)");
  };
  auto* eval_cmd = app.add_subcommand("eval", "Zero-shot recognition top-1 on unseen classes");
  add_eval_flags(eval_cmd);
  eval_cmd->add_option("--nn-mode", nn_mode, "instance, pivot or both");
  auto* gzsl_cmd = app.add_subcommand("gzsl", "Generalized zero-shot SUC curve and AUSUC");
  add_eval_flags(gzsl_cmd);
  gzsl_cmd->add_option("--csv", ef.csv, "SUC curve CSV path");
  gzsl_cmd->add_flag("--dense-grid", dense_grid, "Sweep a 10,001-point calibration grid");
  auto* retrieve_cmd = app.add_subcommand("retrieve", "Zero-shot retrieval mAP");
  add_eval_flags(retrieve_cmd);
  retrieve_cmd->add_option("--ratios", ratios, "Comma-separated retrieval ratios in (0, 1]");
  retrieve_cmd->add_option("--csv", ef.csv, "Per-class AP table CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kSuccess;
    }
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const json config = config_file.empty() ? json::object() : read_json_file(config_file);

    if (synth->parsed()) {
      SynthdataOptions o;
      try {
        o.spec = spec_file.empty() ? section(config, "synthetic").get<data::SyntheticSpec>()
                                   : read_json_file(spec_file).get<data::SyntheticSpec>();
      } catch (const json::exception& e) {
        throw ConfigError(std::string("synthetic spec: ") + e.what());
      }
      if (synth_seed) o.spec.seed = *synth_seed;
      o.out_dir = synth_out;
      o.force = synth_force;
      o.format = synth_csv ? data::FeatureFormat::Csv : data::FeatureFormat::Binary;
      cmd_synthdata(o, err);
      return kSuccess;
    }

    if (train->parsed()) {
      TrainCommandOptions o;
      try {
        o.config = section(config, "train").get<gan::TrainConfig>();
      } catch (const json::exception& e) {
        throw ConfigError(std::string("train config: ") + e.what());
      }
      if (seed) o.config.seed = *seed;
      if (steps) o.config.steps = *steps;
      if (lambda_p) o.config.lambda_p = *lambda_p;
      if (gp_coeff) o.config.gp_coeff = *gp_coeff;
      if (z_dim) o.config.z_dim = *z_dim;
      if (ablation) o.config.ablation = gan::parse_ablation(*ablation);
      if (no_text_fc) o.config.text_fc = false;
      o.data_dir = resolve_data_dir(train_data);
      o.model_out = model_out;
      o.history_out = history_out;
      if (!train_stoplist.empty()) o.stoplist = fs::path(train_stoplist);
      o.record_time = record_time;
      o.quiet = quiet;
      cmd_train(o, err);
      return kSuccess;
    }

    EvalOptions o;
    apply_eval_section(section(config, "eval"), o);
    o.model = ef.model;
    o.data_dir = resolve_data_dir(ef.data);
    if (!ef.stoplist.empty()) o.stoplist = fs::path(ef.stoplist);
    if (ef.bank_size != 0) o.bank_per_class = ef.bank_size;
    if (o.bank_per_class < 0) throw ConfigError("--bank-size must be positive");
    if (ef.bank_seed) o.bank_seed = ef.bank_seed;
    o.report_out = ef.out;
    o.csv_out = ef.csv;
    if (eval_cmd->parsed()) {
      if (!nn_mode.empty()) apply_eval_section(json{{"nn_mode", nn_mode}}, o);
      cmd_eval(o, out);
    } else if (gzsl_cmd->parsed()) {
      if (dense_grid) o.dense_grid = true;
      cmd_gzsl(o, out);
    } else {
      if (!ratios.empty()) o.ratios = parse_ratios(ratios);
      cmd_retrieve(o, out);
    }
    return kSuccess;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace gazsl::cli
