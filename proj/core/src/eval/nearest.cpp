#include "gazsl/eval/nearest.hpp"

#include "gazsl/error.hpp"

#include <limits>

namespace gazsl::eval {
namespace {

void require_width(std::size_t got, const SynthBank& bank) {
  if (bank.empty()) throw ValidationError("classify_nn: empty bank");
  if (got != bank.dim()) {
    throw ShapeError("classify_nn: query has " + std::to_string(got) + " dimensions, bank has " +
                     std::to_string(bank.dim()));
  }
}

/// Index of the smallest entry; strict comparison keeps the first on ties.
Eigen::Index argmin(const Eigen::VectorXd& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v(i) < v(best)) best = i;
  }
  return best;
}

}  // namespace

const char* to_string(NnMode mode) { return mode == NnMode::Instance ? "instance" : "pivot"; }

NnMode parse_nn_mode(const std::string& s) {
  if (s == "instance") return NnMode::Instance;
  if (s == "pivot") return NnMode::Pivot;
  throw ConfigError("unknown nearest-neighbour mode '" + s + "' (expected instance or pivot)");
}

SynthBank::SynthBank(std::map<int, ad::Tensor> vectors) : vectors_(std::move(vectors)) {
  std::size_t dim = 0;
  std::size_t total = 0;
  for (const auto& [class_id, v] : vectors_) {
    if (v.rows() == 0) throw ValidationError("synth bank: class " + std::to_string(class_id) + " has no vectors");
    if (class_ids_.empty()) dim = v.cols();
    if (v.cols() != dim) {
      throw ShapeError("synth bank: class " + std::to_string(class_id) + " vectors have width " +
                       std::to_string(v.cols()) + ", expected " + std::to_string(dim));
    }
    class_ids_.push_back(class_id);
    total += v.rows();
  }
  pivots_ = ad::Tensor(class_ids_.size(), dim);
  stacked_ = ad::Tensor(total, dim);
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < class_ids_.size(); ++i) {
    const ad::Matrix& m = vectors_.at(class_ids_[i]).matrix();
    pivots_.matrix().row(static_cast<Eigen::Index>(i)) = m.colwise().mean();
    stacked_.matrix().middleRows(row, m.rows()) = m;
    row += m.rows();
    stacked_labels_.insert(stacked_labels_.end(), static_cast<std::size_t>(m.rows()), class_ids_[i]);
  }
}

const ad::Tensor& SynthBank::vectors_of(int class_id) const {
  const auto it = vectors_.find(class_id);
  if (it == vectors_.end()) throw ValidationError("synth bank: no class " + std::to_string(class_id));
  return it->second;
}

SynthBank SynthBank::subset(std::span<const int> classes) const {
  std::map<int, ad::Tensor> picked;
  for (int c : classes) picked.emplace(c, vectors_of(c));
  return SynthBank(std::move(picked));
}

ad::Tensor squared_distances(const ad::Tensor& queries, const ad::Tensor& points) {
  if (queries.cols() != points.cols()) {
    throw ShapeError("squared_distances: queries " + ad::shape_string(queries) + " vs points " +
                     ad::shape_string(points));
  }
  ad::Tensor out(queries.rows(), points.rows());
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    const auto query = queries.matrix().row(static_cast<Eigen::Index>(q));
    out.matrix().row(static_cast<Eigen::Index>(q)) =
        (points.matrix().rowwise() - query).rowwise().squaredNorm().transpose();
  }
  return out;
}

int classify_nn(std::span<const double> query, const SynthBank& bank, NnMode mode) {
  require_width(query.size(), bank);
  const Eigen::Map<const Eigen::RowVectorXd> q(query.data(), static_cast<Eigen::Index>(query.size()));
  if (mode == NnMode::Pivot) {
    const Eigen::VectorXd d = (bank.pivots().matrix().rowwise() - q).rowwise().squaredNorm();
    return bank.class_ids()[static_cast<std::size_t>(argmin(d))];
  }
  // Stacked rows are in ascending class order, so the first minimum carries
  // the lowest class id among tied vectors.
  const Eigen::VectorXd d = (bank.stacked().matrix().rowwise() - q).rowwise().squaredNorm();
  return bank.stacked_labels()[static_cast<std::size_t>(argmin(d))];
}

std::vector<int> classify_all(const ad::Tensor& queries, const SynthBank& bank, NnMode mode) {
  require_width(queries.cols(), bank);
  std::vector<int> out;
  out.reserve(queries.rows());
  for (std::size_t q = 0; q < queries.rows(); ++q) out.push_back(classify_nn(queries.row_span(q), bank, mode));
  return out;
}

}  // namespace gazsl::eval
