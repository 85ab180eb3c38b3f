#pragma once

#include "gazsl/autodiff/graph.hpp"
#include "gazsl/autodiff/tensor.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace gazsl::testing {

inline ad::Tensor random_tensor(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double lo = -2.0,
                                double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  ad::Tensor t(rows, cols);
  for (double& v : t.values()) v = u(rng);
  return t;
}

/// ||a - b|| / max(||a|| + ||b||, 1e-6). The floor keeps a gradient that is
/// exactly zero (e.g. a bias cancelling between two means) from comparing as
/// a total mismatch against finite-difference rounding noise near 1e-12.
inline double relative_error(const ad::Tensor& a, const ad::Tensor& b) {
  const double denom = std::max(a.matrix().norm() + b.matrix().norm(), 1e-6);
  return (a.matrix() - b.matrix()).norm() / denom;
}

/// Builds a scalar from trainable leaves holding `inputs`.
using ScalarBuilder = std::function<ad::Var(ad::Graph&, const std::vector<ad::Var>&)>;

inline double evaluate(const std::vector<ad::Tensor>& inputs, const ScalarBuilder& build) {
  ad::Graph g;
  std::vector<ad::Var> vars;
  for (std::size_t i = 0; i < inputs.size(); ++i) vars.push_back(g.parameter(inputs[i], "p" + std::to_string(i)));
  return build(g, vars).value().item();
}

/// Worst relative error between backward() and central differences over all inputs.
inline double gradient_check(const std::vector<ad::Tensor>& inputs, const ScalarBuilder& build, double h = 1e-5) {
  ad::Graph g;
  std::vector<ad::Var> vars;
  for (std::size_t i = 0; i < inputs.size(); ++i) vars.push_back(g.parameter(inputs[i], "p" + std::to_string(i)));
  const ad::Gradients grads = g.backward(build(g, vars));

  double worst = 0.0;
  std::vector<ad::Tensor> probe = inputs;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    ad::Tensor numeric(inputs[i].rows(), inputs[i].cols());
    for (std::size_t k = 0; k < inputs[i].size(); ++k) {
      const double original = probe[i].values()[k];
      probe[i].values()[k] = original + h;
      const double up = evaluate(probe, build);
      probe[i].values()[k] = original - h;
      const double down = evaluate(probe, build);
      probe[i].values()[k] = original;
      numeric.values()[k] = (up - down) / (2.0 * h);
    }
    worst = std::max(worst, relative_error(grads[vars[i]], numeric));
  }
  return worst;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("gazsl_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace gazsl::testing
