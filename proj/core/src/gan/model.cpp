#include "gazsl/gan/model.hpp"

#include "gazsl/autodiff/ops.hpp"
#include "gazsl/error.hpp"

#include <algorithm>
#include <cmath>

namespace gazsl::gan {

const char* to_string(Ablation a) {
  switch (a) {
    case Ablation::None: return "none";
    case Ablation::GanOnly: return "gan-only";
    case Ablation::VpOnly: return "vp-only";
  }
  return "none";
}

Ablation parse_ablation(const std::string& s) {
  if (s == "none") return Ablation::None;
  if (s == "gan-only") return Ablation::GanOnly;
  if (s == "vp-only") return Ablation::VpOnly;
  throw ConfigError("unknown ablation '" + s + "' (expected none, gan-only or vp-only)");
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("train config: " + what);
  };
  require(n_d >= 1, "n_d must be >= 1");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(gen_per_label >= 1, "gen_per_label must be >= 1");
  require(steps >= 0, "steps must be >= 0");
  require(alpha > 0.0, "alpha must be positive");
  require(beta1 >= 0.0 && beta1 < 1.0, "beta1 must lie in [0, 1)");
  require(beta2 >= 0.0 && beta2 < 1.0, "beta2 must lie in [0, 1)");
  require(lambda_p >= 0.0, "lambda_p must be >= 0");
  require(gp_coeff >= 0.0, "gp_coeff must be >= 0");
  require(z_dim >= 1, "z_dim must be >= 1");
  require(d_text >= 0, "d_text must be >= 0");
  require(h_g >= 1 && h_d >= 1, "hidden widths must be >= 1");
  require(leaky_slope >= 0.0, "leaky_slope must be >= 0");
  require(synth_per_class >= 1, "synth_per_class must be >= 1");
}

int resolve_text_width(int d_text, std::size_t vocab_size) {
  if (d_text > 0) return d_text;
  const double scaled = static_cast<double>(vocab_size) * 1000.0 / 7551.0;
  return std::clamp(static_cast<int>(std::lround(scaled)), 32, 1000);
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"n_d", c.n_d},
                     {"batch_size", c.batch_size},
                     {"gen_per_label", c.gen_per_label},
                     {"steps", c.steps},
                     {"alpha", c.alpha},
                     {"beta1", c.beta1},
                     {"beta2", c.beta2},
                     {"lambda_p", c.lambda_p},
                     {"gp_coeff", c.gp_coeff},
                     {"z_dim", c.z_dim},
                     {"d_text", c.d_text},
                     {"h_g", c.h_g},
                     {"h_d", c.h_d},
                     {"leaky_slope", c.leaky_slope},
                     {"text_fc", c.text_fc},
                     {"ablation", to_string(c.ablation)},
                     {"synth_per_class", c.synth_per_class},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  if (!j.is_object()) throw ConfigError("train config: expected a JSON object");
  const nlohmann::json defaults = c;
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw ConfigError("train config: unknown key '" + key + "'");
  }
  try {
    c.n_d = j.value("n_d", c.n_d);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.gen_per_label = j.value("gen_per_label", c.gen_per_label);
    c.steps = j.value("steps", c.steps);
    c.alpha = j.value("alpha", c.alpha);
    c.beta1 = j.value("beta1", c.beta1);
    c.beta2 = j.value("beta2", c.beta2);
    c.lambda_p = j.value("lambda_p", c.lambda_p);
    c.gp_coeff = j.value("gp_coeff", c.gp_coeff);
    c.z_dim = j.value("z_dim", c.z_dim);
    c.d_text = j.value("d_text", c.d_text);
    c.h_g = j.value("h_g", c.h_g);
    c.h_d = j.value("h_d", c.h_d);
    c.leaky_slope = j.value("leaky_slope", c.leaky_slope);
    c.text_fc = j.value("text_fc", c.text_fc);
    c.ablation = parse_ablation(j.value("ablation", std::string(to_string(c.ablation))));
    c.synth_per_class = j.value("synth_per_class", c.synth_per_class);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("train config: ") + e.what());
  }
}

Dense init_dense(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng) {
  const double s = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> u(-s, s);
  Dense d{ad::Tensor(fan_in, fan_out), ad::Tensor(1, fan_out)};
  for (double& w : d.weight.values()) w = u(rng);
  return d;
}

GeneratorParams init_generator(std::size_t text_dim, std::size_t feature_dim, const TrainConfig& config,
                               std::mt19937_64& rng) {
  GeneratorParams g;
  std::size_t text_width = text_dim;
  if (config.text_fc) {
    text_width = static_cast<std::size_t>(resolve_text_width(config.d_text, text_dim));
    g.fc_text = init_dense(text_dim, text_width, rng);
  }
  g.fc_hidden = init_dense(text_width + static_cast<std::size_t>(config.z_dim), static_cast<std::size_t>(config.h_g), rng);
  g.fc_out = init_dense(static_cast<std::size_t>(config.h_g), feature_dim, rng);
  return g;
}

DiscriminatorParams init_discriminator(std::size_t feature_dim, std::size_t num_classes, const TrainConfig& config,
                                       std::mt19937_64& rng) {
  DiscriminatorParams d;
  d.fc_shared = init_dense(feature_dim, static_cast<std::size_t>(config.h_d), rng);
  d.head_real = init_dense(static_cast<std::size_t>(config.h_d), 1, rng);
  d.head_cls = init_dense(static_cast<std::size_t>(config.h_d), num_classes, rng);
  return d;
}

std::vector<std::pair<std::string, ad::Tensor*>> parameters(GeneratorParams& g) {
  std::vector<std::pair<std::string, ad::Tensor*>> out;
  if (g.fc_text) {
    out.emplace_back("G.fc_text.weight", &g.fc_text->weight);
    out.emplace_back("G.fc_text.bias", &g.fc_text->bias);
  }
  out.emplace_back("G.fc_hidden.weight", &g.fc_hidden.weight);
  out.emplace_back("G.fc_hidden.bias", &g.fc_hidden.bias);
  out.emplace_back("G.fc_out.weight", &g.fc_out.weight);
  out.emplace_back("G.fc_out.bias", &g.fc_out.bias);
  return out;
}

std::vector<std::pair<std::string, ad::Tensor*>> parameters(DiscriminatorParams& d) {
  return {{"D.fc_shared.weight", &d.fc_shared.weight}, {"D.fc_shared.bias", &d.fc_shared.bias},
          {"D.head_real.weight", &d.head_real.weight}, {"D.head_real.bias", &d.head_real.bias},
          {"D.head_cls.weight", &d.head_cls.weight},   {"D.head_cls.bias", &d.head_cls.bias}};
}

namespace {

DenseVars bind_dense(ad::Graph& graph, const Dense& d, const std::string& name, bool trainable) {
  if (trainable) return {graph.parameter(d.weight, name + ".weight"), graph.parameter(d.bias, name + ".bias")};
  return {graph.constant(d.weight, name + ".weight"), graph.constant(d.bias, name + ".bias")};
}

ad::Var apply(const DenseVars& d, ad::Var x) { return ad::linear(x, d.weight, d.bias); }

void require_width(const char* what, std::size_t got, std::size_t expected) {
  if (got != expected) {
    throw ShapeError(std::string(what) + ": input has " + std::to_string(got) + " columns, expected " +
                     std::to_string(expected));
  }
}

}  // namespace

GeneratorVars bind(ad::Graph& graph, const GeneratorParams& g, double leaky_slope, bool trainable) {
  GeneratorVars v;
  if (g.fc_text) v.fc_text = bind_dense(graph, *g.fc_text, "G.fc_text", trainable);
  v.fc_hidden = bind_dense(graph, g.fc_hidden, "G.fc_hidden", trainable);
  v.fc_out = bind_dense(graph, g.fc_out, "G.fc_out", trainable);
  v.leaky_slope = leaky_slope;
  return v;
}

DiscriminatorVars bind(ad::Graph& graph, const DiscriminatorParams& d, bool trainable) {
  return {bind_dense(graph, d.fc_shared, "D.fc_shared", trainable),
          bind_dense(graph, d.head_real, "D.head_real", trainable),
          bind_dense(graph, d.head_cls, "D.head_cls", trainable)};
}

ad::Var generator_graph(const GeneratorVars& g, ad::Var text, ad::Var noise) {
  const std::size_t hidden_in = g.fc_hidden.weight.value().rows();
  ad::Var embedded = text;
  if (g.fc_text) {
    require_width("generator text input", text.value().cols(), g.fc_text->weight.value().rows());
    embedded = apply(*g.fc_text, text);
  }
  require_width("generator text+noise input", embedded.value().cols() + noise.value().cols(), hidden_in);
  ad::Var h = ad::leaky_relu(apply(g.fc_hidden, ad::concat_cols(embedded, noise)), g.leaky_slope);
  return ad::tanh(apply(g.fc_out, h));
}

CriticOutput discriminator_graph(const DiscriminatorVars& d, ad::Var features) {
  require_width("discriminator input", features.value().cols(), d.fc_shared.weight.value().rows());
  ad::Var h = ad::relu(apply(d.fc_shared, features));
  return {apply(d.head_real, h), apply(d.head_cls, h)};
}

ad::Tensor generator_forward(const GeneratorParams& g, const ad::Tensor& text, const ad::Tensor& noise,
                             double leaky_slope) {
  if (text.rows() != noise.rows()) {
    throw ShapeError("generator_forward: " + std::to_string(text.rows()) + " text rows vs " +
                     std::to_string(noise.rows()) + " noise rows");
  }
  ad::Graph graph;
  GeneratorVars v = bind(graph, g, leaky_slope, false);
  return generator_graph(v, graph.constant(text), graph.constant(noise)).value();
}

ad::Tensor generator_forward(const GeneratorParams& g, const text::TfIdfVector& text, std::span<const double> noise,
                             double leaky_slope) {
  const std::vector<double> dense = text.dense();
  return generator_forward(g, ad::Tensor::row(dense), ad::Tensor::row(noise), leaky_slope);
}

std::pair<ad::Tensor, ad::Tensor> discriminator_forward(const DiscriminatorParams& d, const ad::Tensor& features) {
  ad::Graph graph;
  DiscriminatorVars v = bind(graph, d, false);
  CriticOutput out = discriminator_graph(v, graph.constant(features));
  return {out.score.value(), out.logits.value()};
}

}  // namespace gazsl::gan
