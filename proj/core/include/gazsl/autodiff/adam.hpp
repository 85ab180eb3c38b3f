#pragma once

#include "gazsl/autodiff/tensor.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gazsl::ad {

struct AdamConfig {
  double alpha = 1e-3;
  double beta1 = 0.5;
  double beta2 = 0.9;
  double epsilon = 1e-8;
};

/// Moment buffers for one parameter list. Buffers are shaped lazily on the
/// first update and must keep matching the parameters afterwards.
struct AdamState {
  AdamConfig config;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;
  std::uint64_t step_count = 0;
};

/// One bias-corrected Adam update of `params` in place.
///
/// Throws NumericalError naming the parameter if any gradient entry is not
/// finite; parameters are left untouched in that case.
void adam_step(std::span<Tensor> params, std::span<const Tensor> grads, std::span<const std::string> names,
               AdamState& state);

}  // namespace gazsl::ad
