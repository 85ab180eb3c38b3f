#pragma once

#include "gazsl/autodiff/tensor.hpp"
#include "gazsl/eval/nearest.hpp"

#include <map>
#include <span>
#include <vector>

namespace gazsl::eval {

/// Fraction of exact matches. Throws ValidationError on empty input or a
/// length mismatch.
double top1_accuracy(std::span<const int> predictions, std::span<const int> truth);

struct SucPoint {
  double lambda = 0.0;      // calibration subtracted from every seen-class score
  double acc_seen = 0.0;    // A_S->T
  double acc_unseen = 0.0;  // A_U->T
};

struct SucCurve {
  std::vector<SucPoint> points;  // ascending A_S->T, descending A_U->T
  double ausuc = 0.0;
};

/// Scores are negative Euclidean distances to class pivots.
struct GzslScores {
  ad::Tensor seen_query_scores;    // [Q_s x |T|]
  ad::Tensor unseen_query_scores;  // [Q_u x |T|]
  std::vector<int> class_ids;      // column -> class id, ascending
  std::vector<char> is_seen;       // per column
  std::vector<int> seen_truth;
  std::vector<int> unseen_truth;
};

GzslScores gzsl_scores(const ad::Tensor& seen_queries, std::span<const int> seen_labels,
                       const ad::Tensor& unseen_queries, std::span<const int> unseen_labels, const SynthBank& bank,
                       std::span<const int> seen_classes);

/// (A_S->T, A_U->T) when `lambda` is subtracted from the seen-class scores.
/// Ties go to the lowest class id.
SucPoint calibrated_accuracy(const GzslScores& scores, double lambda);

/// 201 uniform values over [-2D, 2D] with D the observed score range (1 when
/// the range is zero).
std::vector<double> default_calibration_grid(const GzslScores& scores);

/// Evaluates `grid`, then extends the sweep beyond every per-query switch
/// point so both accuracies reach their extremes, and integrates. The curve
/// is piecewise constant in lambda, so adding a midpoint between every pair
/// of adjacent switch points makes the area exact. Throws on an empty grid.
SucCurve gzsl_curve(const GzslScores& scores, std::span<const double> grid);

/// Trapezoid area under points ordered by A_S->T.
double ausuc(std::span<const SucPoint> points);

/// k_c = round-half-up(ratio * n_class), at least 1. Throws ValidationError
/// when ratio is outside (0, 1].
std::size_t retrieval_count(double ratio, std::size_t n_class);

/// Mean of precision at every relevant position of a ranked 0/1 list; 0 when
/// nothing relevant was retrieved.
double average_precision(std::span<const int> ranked_relevance);

struct RetrievalResult {
  double ratio = 0.0;
  std::map<int, double> average_precision;  // per query class
  double mean_ap = 0.0;
};

/// Ranks the gallery by ascending distance to each class pivot (stable on
/// ties, by gallery index) and scores the top k_c.
RetrievalResult retrieval_map(const SynthBank& bank, const ad::Tensor& gallery, std::span<const int> gallery_labels,
                              double ratio);

}  // namespace gazsl::eval
