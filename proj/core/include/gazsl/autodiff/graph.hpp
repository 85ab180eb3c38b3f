#pragma once

#include "gazsl/autodiff/tensor.hpp"

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

namespace gazsl::ad {

class Graph;

using NodeId = std::uint32_t;

/// Primitive kinds recorded on the tape.
enum class OpKind : std::uint8_t {
  Leaf,
  MatMul,
  Transpose,
  Add,
  Sub,
  Mul,
  Scale,           // a * x
  Affine,          // a * x + b
  AddBias,         // X[n,k] + b[1,k]
  BroadcastRows,   // v[1,k] -> [n,k]
  ReduceRows,      // [n,k] -> [1,k] (column sums)
  BroadcastCols,   // v[n,1] -> [n,k]
  ReduceCols,      // [n,k] -> [n,1] (row sums)
  Fill,            // s[1,1] -> [n,k]
  Sum,             // [n,k] -> [1,1]
  LeakyRelu,
  Tanh,
  Square,
  SafeReciprocal,  // 1/x, and 0 where x == 0
  RowNorm,         // [n,k] -> [n,1] Euclidean norm of each row
  Softmax,         // row-wise
  SoftmaxCrossEntropy,
  ConcatCols,
  SliceCols,
  PadCols,
};

const char* op_name(OpKind kind);

/// Handle to a node in a Graph. Cheap to copy; must not outlive its graph.
class Var {
 public:
  Var() = default;
  Var(Graph* graph, NodeId id) : graph_(graph), id_(id) {}

  Graph& graph() const { return *graph_; }
  NodeId id() const { return id_; }
  const Tensor& value() const;
  bool valid() const { return graph_ != nullptr; }

  friend bool operator==(const Var& a, const Var& b) { return a.graph_ == b.graph_ && a.id_ == b.id_; }

 private:
  Graph* graph_ = nullptr;
  NodeId id_ = 0;
};

/// Gradient of a scalar with respect to every trainable leaf of a graph.
struct ParamGradient {
  Var param;
  std::string name;
  Tensor grad;
};

class Gradients {
 public:
  explicit Gradients(std::vector<ParamGradient> entries) : entries_(std::move(entries)) {}

  const Tensor& operator[](Var param) const;
  const Tensor& operator[](const std::string& name) const;
  std::span<const ParamGradient> entries() const { return entries_; }

 private:
  std::vector<ParamGradient> entries_;
};

/// Append-only tape of primitive records, evaluated eagerly (define-by-run).
///
/// Inputs of a node always precede it, so node order is a topological order.
/// Reverse passes express each vector-Jacobian product with the same
/// primitives, appending new nodes; the gradient returned by input_gradient
/// is therefore itself differentiable.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  /// Non-trainable leaf (data, noise, masks). May still be the target of input_gradient.
  Var constant(Tensor value, std::string name = {});
  /// Trainable leaf; receives an entry in backward()'s result.
  Var parameter(Tensor value, std::string name);

  const Tensor& value(Var v) const { return nodes_[v.id()].value; }
  std::size_t size() const { return nodes_.size(); }
  OpKind kind(Var v) const { return nodes_[v.id()].kind; }

  /// Gradients of a scalar output w.r.t. all trainable leaves (zero when untouched).
  Gradients backward(Var output);

  /// Gradient of a scalar output w.r.t. any node, returned as a graph node.
  Var input_gradient(Var output, Var wrt);

  /// Number of nodes visited by the most recent reverse pass.
  std::size_t last_reverse_visits() const { return last_reverse_visits_; }

  // Node construction used by the op functions in ops.hpp.
  struct Attrs {
    double a = 0.0;
    double b = 0.0;
    std::size_t i0 = 0;
    std::size_t i1 = 0;
  };
  Var record(OpKind kind, std::vector<NodeId> inputs, Attrs attrs, Tensor value);

 private:
  struct Node {
    OpKind kind = OpKind::Leaf;
    std::vector<NodeId> inputs;
    Attrs attrs;
    Tensor value;
    std::string name;
    bool trainable = false;
    bool depends_on_trainable = false;
  };

  std::vector<Var> reverse_pass(Var output, const std::vector<char>& relevant);
  void emit_vjp(NodeId id, Var upstream, const std::vector<char>& relevant, std::vector<Var>& adjoints);
  void accumulate(std::vector<Var>& adjoints, NodeId target, Var contribution);
  Var leaf(Tensor value, std::string name, bool trainable);

  std::deque<Node> nodes_;  // deque keeps value references stable
  std::size_t last_reverse_visits_ = 0;
};

inline const Tensor& Var::value() const { return graph_->value(*this); }

}  // namespace gazsl::ad
