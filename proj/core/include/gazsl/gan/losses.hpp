#pragma once

#include "gazsl/autodiff/graph.hpp"
#include "gazsl/gan/model.hpp"
#include "gazsl/gan/pivots.hpp"

#include <span>

namespace gazsl::gan {

/// L_G = -mean(critic score of generated features) + CE(class logits, labels).
ad::Var generator_loss(ad::Var fake_scores, ad::Var fake_logits, std::span<const int> labels);

struct DiscriminatorLoss {
  ad::Var total;
  ad::Var wasserstein;     // mean D(fake) - mean D(real)
  ad::Var penalty;         // gp_coeff * mean (||grad D(x_hat)|| - 1)^2
  ad::Var classification;  // (CE(fake) + CE(real)) / 2
};

/// Critic loss with gradient penalty and the auxiliary classification terms.
///
/// `mix` holds one interpolation weight per row: x_hat = mix * real + (1 - mix) * fake.
/// `real` and `fake` may be constants or expressions; the penalty gradient is
/// taken through the graph, so parameters of D receive second-order terms.
DiscriminatorLoss discriminator_loss(const DiscriminatorVars& d, ad::Var real, ad::Var fake, std::span<const int> labels,
                                     std::span<const double> mix, double gp_coeff);

/// gp_coeff * mean over rows of (||grad_x D(x)||_2 - 1)^2 evaluated at `points`.
ad::Var gradient_penalty(const DiscriminatorVars& d, ad::Var points, double gp_coeff);

/// (1/C') sum over the C' classes present in `labels` of
/// ||mean of their generated rows - pivot||^2. `labels` are pivot class ids.
ad::Var vp_loss(ad::Var generated, std::span<const int> labels, const VisualPivots& pivots);

}  // namespace gazsl::gan
