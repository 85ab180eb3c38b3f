#include "gazsl/eval/metrics.hpp"

#include "gazsl/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gazsl::eval {
namespace {

int predict(const Eigen::RowVectorXd& scores, const std::vector<char>& is_seen, double lambda) {
  Eigen::Index best = 0;
  double best_score = scores(0) - (is_seen[0] ? lambda : 0.0);
  for (Eigen::Index j = 1; j < scores.size(); ++j) {
    const double s = scores(j) - (is_seen[static_cast<std::size_t>(j)] ? lambda : 0.0);
    if (s > best_score) {
      best = j;
      best_score = s;
    }
  }
  return static_cast<int>(best);
}

double calibrated_top1(const ad::Tensor& scores, std::span<const int> truth, const GzslScores& s, double lambda) {
  if (truth.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t q = 0; q < truth.size(); ++q) {
    const int column = predict(scores.matrix().row(static_cast<Eigen::Index>(q)), s.is_seen, lambda);
    if (s.class_ids[static_cast<std::size_t>(column)] == truth[q]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

/// best seen score minus best unseen score: the lambda at which a query flips.
void collect_switch_points(const ad::Tensor& scores, const std::vector<char>& is_seen, std::vector<double>& out) {
  for (std::size_t q = 0; q < scores.rows(); ++q) {
    double best_seen = -std::numeric_limits<double>::infinity();
    double best_unseen = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < scores.cols(); ++j) {
      double& target = is_seen[j] ? best_seen : best_unseen;
      target = std::max(target, scores(q, j));
    }
    out.push_back(best_seen - best_unseen);
  }
}

}  // namespace

double top1_accuracy(std::span<const int> predictions, std::span<const int> truth) {
  if (predictions.size() != truth.size()) {
    throw ValidationError("top1_accuracy: " + std::to_string(predictions.size()) + " predictions vs " +
                          std::to_string(truth.size()) + " labels");
  }
  if (truth.empty()) throw ValidationError("top1_accuracy: no predictions");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predictions[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

GzslScores gzsl_scores(const ad::Tensor& seen_queries, std::span<const int> seen_labels,
                       const ad::Tensor& unseen_queries, std::span<const int> unseen_labels, const SynthBank& bank,
                       std::span<const int> seen_classes) {
  if (bank.empty()) throw ValidationError("gzsl: empty bank");
  if (seen_queries.rows() != seen_labels.size() || unseen_queries.rows() != unseen_labels.size()) {
    throw ValidationError("gzsl: query rows and labels disagree");
  }
  GzslScores s;
  s.class_ids = bank.class_ids();
  for (int c : s.class_ids) {
    s.is_seen.push_back(std::find(seen_classes.begin(), seen_classes.end(), c) != seen_classes.end() ? 1 : 0);
  }
  for (int c : seen_classes) {
    if (!std::binary_search(s.class_ids.begin(), s.class_ids.end(), c)) {
      throw ValidationError("gzsl: bank has no pivot for seen class " + std::to_string(c));
    }
  }
  auto scores_of = [&](const ad::Tensor& queries) {
    if (queries.rows() == 0) return ad::Tensor(0, bank.num_classes());
    ad::Tensor d = squared_distances(queries, bank.pivots());
    d.matrix() = -d.matrix().cwiseSqrt();
    return d;
  };
  s.seen_query_scores = scores_of(seen_queries);
  s.unseen_query_scores = scores_of(unseen_queries);
  s.seen_truth.assign(seen_labels.begin(), seen_labels.end());
  s.unseen_truth.assign(unseen_labels.begin(), unseen_labels.end());
  return s;
}

SucPoint calibrated_accuracy(const GzslScores& scores, double lambda) {
  return {lambda, calibrated_top1(scores.seen_query_scores, scores.seen_truth, scores, lambda),
          calibrated_top1(scores.unseen_query_scores, scores.unseen_truth, scores, lambda)};
}

std::vector<double> default_calibration_grid(const GzslScores& scores) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const ad::Tensor* t : {&scores.seen_query_scores, &scores.unseen_query_scores}) {
    if (t->size() == 0) continue;
    lo = std::min(lo, t->matrix().minCoeff());
    hi = std::max(hi, t->matrix().maxCoeff());
  }
  double range = hi > lo ? hi - lo : 1.0;
  if (!std::isfinite(range)) range = 1.0;
  std::vector<double> grid(201);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = -2.0 * range + 4.0 * range * static_cast<double>(i) / 200.0;
  return grid;
}

SucCurve gzsl_curve(const GzslScores& scores, std::span<const double> grid) {
  if (grid.empty()) throw ValidationError("gzsl_curve: empty calibration grid");
  std::vector<double> lambdas(grid.begin(), grid.end());

  std::vector<double> switches;
  collect_switch_points(scores.seen_query_scores, scores.is_seen, switches);
  collect_switch_points(scores.unseen_query_scores, scores.is_seen, switches);
  switches.erase(std::remove_if(switches.begin(), switches.end(), [](double v) { return !std::isfinite(v); }),
                 switches.end());
  std::sort(switches.begin(), switches.end());
  switches.erase(std::unique(switches.begin(), switches.end()), switches.end());
  if (!switches.empty()) {
    lambdas.push_back(switches.front() - 1.0);
    lambdas.push_back(switches.back() + 1.0);
    for (std::size_t i = 0; i + 1 < switches.size(); ++i) lambdas.push_back(0.5 * (switches[i] + switches[i + 1]));
  }

  SucCurve curve;
  curve.points.reserve(lambdas.size());
  for (double lambda : lambdas) curve.points.push_back(calibrated_accuracy(scores, lambda));
  std::sort(curve.points.begin(), curve.points.end(), [](const SucPoint& a, const SucPoint& b) {
    if (a.acc_seen != b.acc_seen) return a.acc_seen < b.acc_seen;
    if (a.acc_unseen != b.acc_unseen) return a.acc_unseen > b.acc_unseen;
    return a.lambda > b.lambda;
  });
  curve.ausuc = ausuc(curve.points);
  return curve;
}

double ausuc(std::span<const SucPoint> points) {
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    area += (points[i + 1].acc_seen - points[i].acc_seen) * (points[i].acc_unseen + points[i + 1].acc_unseen) / 2.0;
  }
  return area;
}

std::size_t retrieval_count(double ratio, std::size_t n_class) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw ValidationError("retrieval ratio " + std::to_string(ratio) + " outside (0, 1]");
  }
  const double k = std::floor(ratio * static_cast<double>(n_class) + 0.5);
  return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

double average_precision(std::span<const int> ranked_relevance) {
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < ranked_relevance.size(); ++i) {
    if (ranked_relevance[i] == 0) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

RetrievalResult retrieval_map(const SynthBank& bank, const ad::Tensor& gallery, std::span<const int> gallery_labels,
                              double ratio) {
  if (gallery.rows() == 0) throw ValidationError("retrieval: empty gallery");
  if (gallery.rows() != gallery_labels.size()) throw ValidationError("retrieval: gallery rows and labels disagree");
  if (bank.empty()) throw ValidationError("retrieval: empty bank");
  RetrievalResult result;
  result.ratio = ratio;
  const ad::Tensor distances = squared_distances(gallery, bank.pivots());
  std::vector<std::size_t> order(gallery.rows());
  for (std::size_t ci = 0; ci < bank.num_classes(); ++ci) {
    const int class_id = bank.class_ids()[ci];
    const auto n_class = static_cast<std::size_t>(std::count(gallery_labels.begin(), gallery_labels.end(), class_id));
    const std::size_t k = std::min(retrieval_count(ratio, n_class), order.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return distances(a, ci) < distances(b, ci); });
    std::vector<int> relevance(k);
    for (std::size_t i = 0; i < k; ++i) relevance[i] = gallery_labels[order[i]] == class_id ? 1 : 0;
    const double ap = average_precision(relevance);
    result.average_precision[class_id] = ap;
    result.mean_ap += ap;
  }
  result.mean_ap /= static_cast<double>(bank.num_classes());
  return result;
}

}  // namespace gazsl::eval
