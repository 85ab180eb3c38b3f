#include "gazsl/gan/losses.hpp"

#include "gazsl/autodiff/ops.hpp"
#include "gazsl/error.hpp"

#include <map>

namespace gazsl::gan {

ad::Var generator_loss(ad::Var fake_scores, ad::Var fake_logits, std::span<const int> labels) {
  if (fake_scores.value().rows() == 0) throw ValidationError("generator_loss: empty batch");
  return ad::scale(ad::mean(fake_scores), -1.0) + ad::softmax_cross_entropy(fake_logits, labels);
}

ad::Var gradient_penalty(const DiscriminatorVars& d, ad::Var points, double gp_coeff) {
  ad::Graph& g = points.graph();
  // Each score depends only on its own row, so the gradient of the summed
  // scores holds every per-row input gradient.
  ad::Var scores = discriminator_graph(d, points).score;
  ad::Var grad = g.input_gradient(ad::sum(scores), points);
  ad::Var deviation = ad::affine(ad::row_norm(grad), 1.0, -1.0);
  return ad::scale(ad::mean(ad::square(deviation)), gp_coeff);
}

DiscriminatorLoss discriminator_loss(const DiscriminatorVars& d, ad::Var real, ad::Var fake, std::span<const int> labels,
                                     std::span<const double> mix, double gp_coeff) {
  const std::size_t n = real.value().rows();
  if (n == 0) throw ValidationError("discriminator_loss: empty batch");
  if (fake.value().rows() != n || labels.size() != n || mix.size() != n) {
    throw ValidationError("discriminator_loss: batch size mismatch (real " + std::to_string(n) + ", fake " +
                          std::to_string(fake.value().rows()) + ", labels " + std::to_string(labels.size()) +
                          ", mix " + std::to_string(mix.size()) + ")");
  }
  ad::Graph& g = real.graph();

  CriticOutput on_real = discriminator_graph(d, real);
  CriticOutput on_fake = discriminator_graph(d, fake);

  const std::size_t k = real.value().cols();
  ad::Tensor w(n, k);
  ad::Tensor one_minus_w(n, k);
  for (std::size_t r = 0; r < n; ++r) {
    w.matrix().row(static_cast<Eigen::Index>(r)).setConstant(mix[r]);
    one_minus_w.matrix().row(static_cast<Eigen::Index>(r)).setConstant(1.0 - mix[r]);
  }
  ad::Var interpolates = g.constant(std::move(w)) * real + g.constant(std::move(one_minus_w)) * fake;

  DiscriminatorLoss out;
  out.wasserstein = ad::mean(on_fake.score) - ad::mean(on_real.score);
  out.penalty = gradient_penalty(d, interpolates, gp_coeff);
  out.classification = ad::scale(
      ad::softmax_cross_entropy(on_fake.logits, labels) + ad::softmax_cross_entropy(on_real.logits, labels), 0.5);
  out.total = out.wasserstein + out.penalty + out.classification;
  return out;
}

ad::Var vp_loss(ad::Var generated, std::span<const int> labels, const VisualPivots& pivots) {
  const std::size_t n = generated.value().rows();
  if (labels.size() != n) throw ValidationError("vp_loss: labels do not match generated rows");
  if (n == 0) throw ValidationError("vp_loss: empty batch");
  if (pivots.centroids.cols() != generated.value().cols()) {
    throw ShapeError("vp_loss: generated features " + ad::shape_string(generated.value()) + " vs pivots " +
                     ad::shape_string(pivots.centroids));
  }

  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < n; ++r) groups[labels[r]].push_back(r);

  // Group means as one product: averaging[c, r] = 1/n_c when row r is in class c.
  const std::size_t present = groups.size();
  ad::Tensor averaging(present, n);
  ad::Tensor targets(present, generated.value().cols());
  std::size_t row = 0;
  for (const auto& [class_id, members] : groups) {
    const std::ptrdiff_t p = pivots.row_of(class_id);
    if (p < 0) throw ValidationError("vp_loss: no visual pivot for class " + std::to_string(class_id));
    for (std::size_t r : members) averaging(row, r) = 1.0 / static_cast<double>(members.size());
    targets.matrix().row(static_cast<Eigen::Index>(row)) = pivots.centroids.matrix().row(p);
    ++row;
  }
  ad::Graph& g = generated.graph();
  ad::Var means = ad::matmul(g.constant(std::move(averaging)), generated);
  ad::Var diff = means - g.constant(std::move(targets));
  return ad::scale(ad::sum(ad::square(diff)), 1.0 / static_cast<double>(present));
}

}  // namespace gazsl::gan
