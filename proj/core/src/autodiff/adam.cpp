#include "gazsl/autodiff/adam.hpp"

#include "gazsl/error.hpp"

#include <cmath>

namespace gazsl::ad {

void adam_step(std::span<Tensor> params, std::span<const Tensor> grads, std::span<const std::string> names,
               AdamState& state) {
  if (params.size() != grads.size() || params.size() != names.size()) {
    throw ShapeError("adam_step: " + std::to_string(params.size()) + " params, " + std::to_string(grads.size()) +
                     " grads, " + std::to_string(names.size()) + " names");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].rows() != grads[i].rows() || params[i].cols() != grads[i].cols()) {
      throw ShapeError("adam_step: gradient of '" + names[i] + "' is " + shape_string(grads[i]) + ", parameter is " +
                       shape_string(params[i]));
    }
    if (!grads[i].all_finite()) throw NumericalError("adam_step: non-finite gradient for parameter '" + names[i] + "'");
  }

  if (state.first_moment.empty()) {
    for (const Tensor& p : params) {
      state.first_moment.emplace_back(p.rows(), p.cols());
      state.second_moment.emplace_back(p.rows(), p.cols());
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw ShapeError("adam_step: optimizer state tracks " + std::to_string(state.first_moment.size()) +
                     " parameters, got " + std::to_string(params.size()));
  }

  const AdamConfig& c = state.config;
  const auto t = static_cast<double>(state.step_count + 1);
  const double bias1 = 1.0 - std::pow(c.beta1, t);
  const double bias2 = 1.0 - std::pow(c.beta2, t);

  for (std::size_t i = 0; i < params.size(); ++i) {
    if (state.first_moment[i].rows() != params[i].rows() || state.first_moment[i].cols() != params[i].cols()) {
      throw ShapeError("adam_step: moment buffer of '" + names[i] + "' does not match the parameter shape");
    }
  }

  for (std::size_t i = 0; i < params.size(); ++i) {
    auto m = state.first_moment[i].matrix().array();
    auto v = state.second_moment[i].matrix().array();
    const auto g = grads[i].matrix().array();
    m = c.beta1 * m + (1.0 - c.beta1) * g;
    v = c.beta2 * v + (1.0 - c.beta2) * g.square();
    params[i].matrix().array() -= c.alpha * (m / bias1) / ((v / bias2).sqrt() + c.epsilon);
  }
  ++state.step_count;
}

}  // namespace gazsl::ad
