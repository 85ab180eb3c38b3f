#include "gazsl/autodiff/graph.hpp"

#include "gazsl/autodiff/ops.hpp"
#include "gazsl/error.hpp"

#include <algorithm>

namespace gazsl::ad {

const char* op_name(OpKind kind) {
  switch (kind) {
    case OpKind::Leaf: return "leaf";
    case OpKind::MatMul: return "matmul";
    case OpKind::Transpose: return "transpose";
    case OpKind::Add: return "add";
    case OpKind::Sub: return "sub";
    case OpKind::Mul: return "mul";
    case OpKind::Scale: return "scale";
    case OpKind::Affine: return "affine";
    case OpKind::AddBias: return "add_bias";
    case OpKind::BroadcastRows: return "broadcast_rows";
    case OpKind::ReduceRows: return "reduce_rows";
    case OpKind::BroadcastCols: return "broadcast_cols";
    case OpKind::ReduceCols: return "reduce_cols";
    case OpKind::Fill: return "fill";
    case OpKind::Sum: return "sum";
    case OpKind::LeakyRelu: return "leaky_relu";
    case OpKind::Tanh: return "tanh";
    case OpKind::Square: return "square";
    case OpKind::SafeReciprocal: return "safe_reciprocal";
    case OpKind::RowNorm: return "row_norm";
    case OpKind::Softmax: return "softmax";
    case OpKind::SoftmaxCrossEntropy: return "softmax_cross_entropy";
    case OpKind::ConcatCols: return "concat_cols";
    case OpKind::SliceCols: return "slice_cols";
    case OpKind::PadCols: return "pad_cols";
  }
  return "unknown";
}

const Tensor& Gradients::operator[](Var param) const {
  for (const auto& e : entries_) {
    if (e.param == param) return e.grad;
  }
  throw ValidationError("Gradients: node is not a trainable parameter of this graph");
}

const Tensor& Gradients::operator[](const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e.grad;
  }
  throw ValidationError("Gradients: no parameter named '" + name + "'");
}

Var Graph::leaf(Tensor value, std::string name, bool trainable) {
  Node n;
  n.kind = OpKind::Leaf;
  n.value = std::move(value);
  n.name = std::move(name);
  n.trainable = trainable;
  n.depends_on_trainable = trainable;
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<NodeId>(nodes_.size() - 1));
}

Var Graph::constant(Tensor value, std::string name) { return leaf(std::move(value), std::move(name), false); }

Var Graph::parameter(Tensor value, std::string name) { return leaf(std::move(value), std::move(name), true); }

Var Graph::record(OpKind kind, std::vector<NodeId> inputs, Attrs attrs, Tensor value) {
  Node n;
  n.kind = kind;
  n.attrs = attrs;
  n.value = std::move(value);
  n.depends_on_trainable =
      std::any_of(inputs.begin(), inputs.end(), [this](NodeId i) { return nodes_[i].depends_on_trainable; });
  n.inputs = std::move(inputs);
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<NodeId>(nodes_.size() - 1));
}

void Graph::accumulate(std::vector<Var>& adjoints, NodeId target, Var contribution) {
  Var& slot = adjoints[target];
  slot = slot.valid() ? add(slot, contribution) : contribution;
}

void Graph::emit_vjp(NodeId id, Var g, const std::vector<char>& relevant, std::vector<Var>& adjoints) {
  const OpKind kind = nodes_[id].kind;
  const std::vector<NodeId> in = nodes_[id].inputs;
  const Attrs attrs = nodes_[id].attrs;
  const Var self(this, id);
  auto input = [&](std::size_t k) { return Var(this, in[k]); };
  auto wants = [&](std::size_t k) { return relevant[in[k]] != 0; };
  auto give = [&](std::size_t k, Var contribution) { accumulate(adjoints, in[k], contribution); };

  switch (kind) {
    case OpKind::Leaf:
      break;
    case OpKind::MatMul:
      if (wants(0)) give(0, matmul(g, transpose(input(1))));
      if (wants(1)) give(1, matmul(transpose(input(0)), g));
      break;
    case OpKind::Transpose:
      give(0, transpose(g));
      break;
    case OpKind::Add:
      if (wants(0)) give(0, g);
      if (wants(1)) give(1, g);
      break;
    case OpKind::Sub:
      if (wants(0)) give(0, g);
      if (wants(1)) give(1, scale(g, -1.0));
      break;
    case OpKind::Mul:
      if (wants(0)) give(0, mul(g, input(1)));
      if (wants(1)) give(1, mul(g, input(0)));
      break;
    case OpKind::Scale:
    case OpKind::Affine:
      give(0, scale(g, attrs.a));
      break;
    case OpKind::AddBias:
      if (wants(0)) give(0, g);
      if (wants(1)) give(1, reduce_rows(g));
      break;
    case OpKind::BroadcastRows:
      give(0, reduce_rows(g));
      break;
    case OpKind::ReduceRows:
      give(0, broadcast_rows(g, nodes_[in[0]].value.rows()));
      break;
    case OpKind::BroadcastCols:
      give(0, reduce_cols(g));
      break;
    case OpKind::ReduceCols:
      give(0, broadcast_cols(g, nodes_[in[0]].value.cols()));
      break;
    case OpKind::Fill:
      give(0, sum(g));
      break;
    case OpKind::Sum:
      give(0, fill(g, nodes_[in[0]].value.rows(), nodes_[in[0]].value.cols()));
      break;
    case OpKind::LeakyRelu: {
      // The mask is piecewise constant, so it enters the tape as a constant.
      const Tensor& x = nodes_[in[0]].value;
      Tensor mask(x.rows(), x.cols());
      mask.matrix() = x.matrix().unaryExpr([&](double v) { return v > 0.0 ? 1.0 : attrs.a; });
      give(0, mul(g, constant(std::move(mask))));
      break;
    }
    case OpKind::Tanh:
      give(0, mul(g, affine(square(self), -1.0, 1.0)));
      break;
    case OpKind::Square:
      give(0, mul(g, scale(input(0), 2.0)));
      break;
    case OpKind::SafeReciprocal:
      give(0, mul(g, scale(square(self), -1.0)));
      break;
    case OpKind::RowNorm: {
      // d||x||/dx = x/||x||, taken as 0 at x = 0.
      const std::size_t k = nodes_[in[0]].value.cols();
      give(0, mul(broadcast_cols(mul(g, safe_reciprocal(self)), k), input(0)));
      break;
    }
    case OpKind::Softmax: {
      const std::size_t k = nodes_[id].value.cols();
      give(0, mul(self, sub(g, broadcast_cols(reduce_cols(mul(g, self)), k))));
      break;
    }
    case OpKind::SoftmaxCrossEntropy: {
      // Input 1 is the one-hot target, an internal constant.
      if (wants(0)) {
        const Tensor& logits = nodes_[in[0]].value;
        const double inv_n = 1.0 / static_cast<double>(logits.rows());
        give(0, scale(mul(fill(g, logits.rows(), logits.cols()), sub(softmax(input(0)), input(1))), inv_n));
      }
      break;
    }
    case OpKind::ConcatCols: {
      const std::size_t ka = nodes_[in[0]].value.cols();
      const std::size_t kb = nodes_[in[1]].value.cols();
      if (wants(0)) give(0, slice_cols(g, 0, ka));
      if (wants(1)) give(1, slice_cols(g, ka, kb));
      break;
    }
    case OpKind::SliceCols:
      give(0, pad_cols(g, attrs.i0, nodes_[in[0]].value.cols()));
      break;
    case OpKind::PadCols:
      give(0, slice_cols(g, attrs.i0, nodes_[in[0]].value.cols()));
      break;
  }
}

std::vector<Var> Graph::reverse_pass(Var output, const std::vector<char>& relevant) {
  std::vector<Var> adjoints(output.id() + 1);
  adjoints[output.id()] = constant(Tensor::scalar(1.0), "seed");
  last_reverse_visits_ = 0;
  for (NodeId id = output.id() + 1; id-- > 0;) {
    if (!adjoints[id].valid() || !relevant[id]) continue;
    ++last_reverse_visits_;
    emit_vjp(id, adjoints[id], relevant, adjoints);
  }
  return adjoints;
}

Gradients Graph::backward(Var output) {
  if (output.valid() && &output.graph() != this) throw ValidationError("backward: output belongs to another graph");
  const Tensor& out = value(output);
  if (!out.is_scalar()) throw ShapeError("backward: output must be scalar, got " + shape_string(out));

  std::vector<char> relevant(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) relevant[i] = nodes_[i].depends_on_trainable ? 1 : 0;

  const std::size_t n_before = nodes_.size();
  std::vector<Var> adjoints = reverse_pass(output, relevant);

  std::vector<ParamGradient> entries;
  for (std::size_t i = 0; i < n_before; ++i) {
    const Node& n = nodes_[i];
    if (!n.trainable) continue;
    Var param(this, static_cast<NodeId>(i));
    if (i < adjoints.size() && adjoints[i].valid()) {
      entries.push_back({param, n.name, adjoints[i].value()});
    } else {
      entries.push_back({param, n.name, Tensor(n.value.rows(), n.value.cols())});
    }
  }
  return Gradients(std::move(entries));
}

Var Graph::input_gradient(Var output, Var wrt) {
  const Tensor& out = value(output);
  if (!out.is_scalar()) throw ShapeError("input_gradient: output must be scalar, got " + shape_string(out));

  // Nodes on some path from wrt: only these carry a nonzero adjoint toward wrt.
  std::vector<char> relevant(nodes_.size(), 0);
  if (wrt.id() <= output.id()) {
    relevant[wrt.id()] = 1;
    for (NodeId id = wrt.id() + 1; id <= output.id(); ++id) {
      const auto& ins = nodes_[id].inputs;
      relevant[id] = std::any_of(ins.begin(), ins.end(), [&](NodeId i) { return relevant[i] != 0; }) ? 1 : 0;
    }
  }
  if (!relevant[output.id()]) throw ValidationError("input_gradient: wrt node is not an ancestor of output");

  std::vector<Var> adjoints = reverse_pass(output, relevant);
  return adjoints[wrt.id()];
}

}  // namespace gazsl::ad
