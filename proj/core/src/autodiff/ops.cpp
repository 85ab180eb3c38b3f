#include "gazsl/autodiff/ops.hpp"

#include "gazsl/error.hpp"

#include <cmath>
#include <string>

namespace gazsl::ad {
namespace {

using Attrs = Graph::Attrs;

[[noreturn]] void shape_error(const char* op, const Tensor& a, const Tensor& b) {
  throw ShapeError(std::string(op) + ": shape mismatch " + shape_string(a) + " vs " + shape_string(b));
}

[[noreturn]] void shape_error(const char* op, const Tensor& a, const std::string& expected) {
  throw ShapeError(std::string(op) + ": got " + shape_string(a) + ", expected " + expected);
}

Graph& same_graph(const char* op, Var a, Var b) {
  if (&a.graph() != &b.graph()) throw ValidationError(std::string(op) + ": operands belong to different graphs");
  return a.graph();
}

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) shape_error(op, a, b);
}

Var unary(OpKind kind, Var x, Attrs attrs, Matrix value) {
  return x.graph().record(kind, {x.id()}, attrs, Tensor(std::move(value)));
}

}  // namespace

Var matmul(Var a, Var b) {
  Graph& g = same_graph("matmul", a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.cols() != bv.rows()) shape_error("matmul", av, bv);
  Matrix out = av.matrix() * bv.matrix();
  return g.record(OpKind::MatMul, {a.id(), b.id()}, {}, Tensor(std::move(out)));
}

Var transpose(Var x) { return unary(OpKind::Transpose, x, {}, x.value().matrix().transpose()); }

Var add(Var a, Var b) {
  Graph& g = same_graph("add", a, b);
  require_same_shape("add", a.value(), b.value());
  return g.record(OpKind::Add, {a.id(), b.id()}, {}, Tensor(Matrix(a.value().matrix() + b.value().matrix())));
}

Var sub(Var a, Var b) {
  Graph& g = same_graph("sub", a, b);
  require_same_shape("sub", a.value(), b.value());
  return g.record(OpKind::Sub, {a.id(), b.id()}, {}, Tensor(Matrix(a.value().matrix() - b.value().matrix())));
}

Var mul(Var a, Var b) {
  Graph& g = same_graph("mul", a, b);
  require_same_shape("mul", a.value(), b.value());
  return g.record(OpKind::Mul, {a.id(), b.id()}, {},
                  Tensor(Matrix(a.value().matrix().cwiseProduct(b.value().matrix()))));
}

Var scale(Var x, double factor) {
  return unary(OpKind::Scale, x, {.a = factor}, x.value().matrix() * factor);
}

Var affine(Var x, double factor, double shift) {
  Matrix out = (x.value().matrix().array() * factor + shift).matrix();
  return unary(OpKind::Affine, x, {.a = factor, .b = shift}, std::move(out));
}

Var add_bias(Var x, Var bias) {
  Graph& g = same_graph("add_bias", x, bias);
  const Tensor& xv = x.value();
  const Tensor& bv = bias.value();
  if (bv.rows() != 1 || bv.cols() != xv.cols()) shape_error("add_bias", xv, bv);
  Matrix out = xv.matrix().rowwise() + bv.matrix().row(0);
  return g.record(OpKind::AddBias, {x.id(), bias.id()}, {}, Tensor(std::move(out)));
}

Var broadcast_rows(Var row, std::size_t rows) {
  const Tensor& v = row.value();
  if (v.rows() != 1) shape_error("broadcast_rows", v, "[1xk]");
  return unary(OpKind::BroadcastRows, row, {.i0 = rows}, v.matrix().replicate(static_cast<Eigen::Index>(rows), 1));
}

Var reduce_rows(Var x) { return unary(OpKind::ReduceRows, x, {}, x.value().matrix().colwise().sum()); }

Var broadcast_cols(Var col, std::size_t cols) {
  const Tensor& v = col.value();
  if (v.cols() != 1) shape_error("broadcast_cols", v, "[nx1]");
  return unary(OpKind::BroadcastCols, col, {.i0 = cols}, v.matrix().replicate(1, static_cast<Eigen::Index>(cols)));
}

Var reduce_cols(Var x) { return unary(OpKind::ReduceCols, x, {}, x.value().matrix().rowwise().sum()); }

Var fill(Var scalar, std::size_t rows, std::size_t cols) {
  const Tensor& v = scalar.value();
  if (!v.is_scalar()) shape_error("fill", v, "[1x1]");
  return unary(OpKind::Fill, scalar, {.i0 = rows, .i1 = cols},
               Matrix::Constant(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols), v(0, 0)));
}

Var sum(Var x) { return unary(OpKind::Sum, x, {}, Matrix::Constant(1, 1, x.value().matrix().sum())); }

Var mean(Var x) {
  const std::size_t n = x.value().size();
  if (n == 0) throw ShapeError("mean: empty tensor");
  return scale(sum(x), 1.0 / static_cast<double>(n));
}

Var leaky_relu(Var x, double negative_slope) {
  Matrix out = x.value().matrix().unaryExpr([negative_slope](double v) { return v > 0.0 ? v : negative_slope * v; });
  return unary(OpKind::LeakyRelu, x, {.a = negative_slope}, std::move(out));
}

Var relu(Var x) { return leaky_relu(x, 0.0); }

Var tanh(Var x) { return unary(OpKind::Tanh, x, {}, x.value().matrix().array().tanh().matrix()); }

Var square(Var x) { return unary(OpKind::Square, x, {}, x.value().matrix().array().square().matrix()); }

Var safe_reciprocal(Var x) {
  Matrix out = x.value().matrix().unaryExpr([](double v) { return v == 0.0 ? 0.0 : 1.0 / v; });
  return unary(OpKind::SafeReciprocal, x, {}, std::move(out));
}

Var row_norm(Var x) { return unary(OpKind::RowNorm, x, {}, x.value().matrix().rowwise().norm()); }

Var softmax(Var logits) {
  const Matrix& z = logits.value().matrix();
  Matrix out(z.rows(), z.cols());
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    const double m = z.row(r).maxCoeff();
    out.row(r) = (z.row(r).array() - m).exp().matrix();
    out.row(r) /= out.row(r).sum();
  }
  return unary(OpKind::Softmax, logits, {}, std::move(out));
}

Var softmax_cross_entropy(Var logits, std::span<const int> labels) {
  const Tensor& z = logits.value();
  if (labels.size() != z.rows()) {
    throw ShapeError("softmax_cross_entropy: " + std::to_string(labels.size()) + " labels for logits " +
                     shape_string(z));
  }
  if (z.rows() == 0) throw ShapeError("softmax_cross_entropy: empty batch");
  Tensor onehot(z.rows(), z.cols());
  double total = 0.0;
  for (std::size_t r = 0; r < z.rows(); ++r) {
    const int label = labels[r];
    if (label < 0 || static_cast<std::size_t>(label) >= z.cols()) {
      throw ValidationError("softmax_cross_entropy: label " + std::to_string(label) + " outside [0, " +
                            std::to_string(z.cols()) + ")");
    }
    onehot(r, static_cast<std::size_t>(label)) = 1.0;
    const auto row = z.matrix().row(static_cast<Eigen::Index>(r));
    const double m = row.maxCoeff();
    const double lse = m + std::log((row.array() - m).exp().sum());
    total += lse - row(label);
  }
  Graph& g = logits.graph();
  Var target = g.constant(std::move(onehot), "onehot");
  return g.record(OpKind::SoftmaxCrossEntropy, {logits.id(), target.id()}, {},
                  Tensor::scalar(total / static_cast<double>(z.rows())));
}

Var concat_cols(Var a, Var b) {
  Graph& g = same_graph("concat_cols", a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.rows() != bv.rows()) shape_error("concat_cols", av, bv);
  Matrix out(av.matrix().rows(), av.matrix().cols() + bv.matrix().cols());
  out << av.matrix(), bv.matrix();
  return g.record(OpKind::ConcatCols, {a.id(), b.id()}, {}, Tensor(std::move(out)));
}

Var slice_cols(Var x, std::size_t begin, std::size_t count) {
  const Tensor& v = x.value();
  if (begin + count > v.cols()) {
    shape_error("slice_cols", v, "at least " + std::to_string(begin + count) + " columns");
  }
  Matrix out = v.matrix().middleCols(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(count));
  return unary(OpKind::SliceCols, x, {.i0 = begin, .i1 = count}, std::move(out));
}

Var pad_cols(Var x, std::size_t begin, std::size_t total) {
  const Tensor& v = x.value();
  if (begin + v.cols() > total) shape_error("pad_cols", v, "at most " + std::to_string(total - begin) + " columns");
  Matrix out = Matrix::Zero(v.matrix().rows(), static_cast<Eigen::Index>(total));
  out.middleCols(static_cast<Eigen::Index>(begin), v.matrix().cols()) = v.matrix();
  return unary(OpKind::PadCols, x, {.i0 = begin, .i1 = total}, std::move(out));
}

}  // namespace gazsl::ad
