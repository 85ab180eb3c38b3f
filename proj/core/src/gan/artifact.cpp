#include "gazsl/gan/artifact.hpp"

#include "gazsl/error.hpp"
#include "gazsl/util/hash.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gazsl::gan {
namespace {

using nlohmann::json;

json tensor_to_json(const ad::Tensor& t) {
  json data = json::array();
  for (double v : t.values()) data.push_back(v);
  return json{{"rows", t.rows()}, {"cols", t.cols()}, {"data", std::move(data)}};
}

ad::Tensor tensor_from_json(const json& j, const std::string& name) {
  try {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const json& data = j.at("data");
    if (!data.is_array() || data.size() != rows * cols) {
      throw ValidationError("model: parameter '" + name + "' holds " + std::to_string(data.size()) +
                            " values, expected " + std::to_string(rows * cols));
    }
    ad::Tensor t(rows, cols);
    std::size_t i = 0;
    for (double& v : t.values()) v = data[i++].get<double>();
    return t;
  } catch (const json::exception& e) {
    throw ValidationError("model: parameter '" + name + "': " + e.what());
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string config_digest(const TrainConfig& config) { return util::digest_hex(json(config).dump()); }

json model_to_json(const GanModel& model) {
  GanModel copy = model;
  json params = json::object();
  for (const auto& [name, t] : parameters(copy.generator)) params[name] = tensor_to_json(*t);
  for (const auto& [name, t] : parameters(copy.discriminator)) params[name] = tensor_to_json(*t);
  return json{{"format", kModelFormat},
              {"format_version", kModelFormatVersion},
              {"config", model.config},
              {"config_digest", config_digest(model.config)},
              {"run_digest", model.run_digest},
              {"vocabulary_digest", model.vocabulary_digest},
              {"text_dim", model.text_dim},
              {"feature_dim", model.feature_dim},
              {"seen_classes", model.seen_classes},
              {"scaler", {{"center", model.scaler.center()}, {"scale", model.scaler.scale()}}},
              {"parameters", std::move(params)}};
}

GanModel model_from_json(const json& j) {
  if (!j.is_object() || j.value("format", std::string()) != kModelFormat) {
    throw ValidationError("model: not a gazsl model file");
  }
  const int version = j.value("format_version", -1);
  if (version != kModelFormatVersion) {
    throw ValidationError("model: unsupported format_version " + std::to_string(version) + " (expected " +
                          std::to_string(kModelFormatVersion) + ")");
  }
  GanModel model;
  try {
    j.at("config").get_to(model.config);
    model.run_digest = j.at("run_digest").get<std::string>();
    model.vocabulary_digest = j.at("vocabulary_digest").get<std::string>();
    model.text_dim = j.at("text_dim").get<std::size_t>();
    model.feature_dim = j.at("feature_dim").get<std::size_t>();
    model.seen_classes = j.at("seen_classes").get<std::vector<int>>();
    model.scaler = data::FeatureScaler(j.at("scaler").at("center").get<std::vector<double>>(),
                                       j.at("scaler").at("scale").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model: ") + e.what());
  }
  if (j.value("config_digest", std::string()) != config_digest(model.config)) {
    throw ValidationError("model: config digest does not match the stored config");
  }

  // Build correctly shaped buffers, then overwrite them from the file.
  std::mt19937_64 unused(0);
  model.generator = init_generator(model.text_dim, model.feature_dim, model.config, unused);
  model.discriminator = init_discriminator(model.feature_dim, model.seen_classes.size(), model.config, unused);
  const json& params = j.at("parameters");
  auto restore = [&](const std::string& name, ad::Tensor* target) {
    if (!params.contains(name)) throw ValidationError("model: missing parameter '" + name + "'");
    ad::Tensor t = tensor_from_json(params.at(name), name);
    if (t.shape() != target->shape()) {
      throw ShapeError("model: parameter '" + name + "' has shape " + ad::shape_string(t) + ", expected " +
                       ad::shape_string(*target));
    }
    if (!t.all_finite()) throw ValidationError("model: parameter '" + name + "' is not finite");
    *target = std::move(t);
  };
  for (const auto& [name, t] : parameters(model.generator)) restore(name, t);
  for (const auto& [name, t] : parameters(model.discriminator)) restore(name, t);
  if (model.scaler.dim() != model.feature_dim) {
    throw ValidationError("model: scaler covers " + std::to_string(model.scaler.dim()) + " dimensions, expected " +
                          std::to_string(model.feature_dim));
  }
  return model;
}

void save_model(const GanModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write model file " + path.string());
  out << model_to_json(model).dump(1) << '\n';
  if (!out) throw Error("failed writing model file " + path.string());
}

GanModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read model file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("model file " + path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

void write_loss_csv(std::span<const LossRecord> history, const TrainConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write loss history " + path.string());
  out << "# config: " << json(config).dump() << '\n';
  out << "step,L_D,L_G,L_e,wall_ms\n";
  for (const LossRecord& r : history) {
    out << r.step << ',' << format_double(r.loss_d) << ',' << format_double(r.loss_g) << ','
        << format_double(r.loss_e) << ',' << format_double(r.wall_ms) << '\n';
  }
  if (!out) throw Error("failed writing loss history " + path.string());
}

std::vector<LossRecord> read_loss_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read loss history " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind('#', 0) != 0) break;
  }
  if (line != "step,L_D,L_G,L_e,wall_ms") {
    throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": unexpected header");
  }
  std::vector<LossRecord> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    LossRecord r;
    char c1 = 0, c2 = 0, c3 = 0, c4 = 0;
    if (!(fields >> r.step >> c1 >> r.loss_d >> c2 >> r.loss_g >> c3 >> r.loss_e >> c4 >> r.wall_ms) || c1 != ',' ||
        c2 != ',' || c3 != ',' || c4 != ',') {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": malformed loss record");
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace gazsl::gan
