#pragma once

#include "gazsl/autodiff/graph.hpp"

#include <cstddef>
#include <span>

namespace gazsl::ad {

// Every function evaluates its result immediately and records it on the
// operands' graph. Shape mismatches throw ShapeError naming the op and shapes.

Var matmul(Var a, Var b);
Var transpose(Var x);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var x, double factor);
Var affine(Var x, double factor, double shift);
Var add_bias(Var x, Var bias);
Var broadcast_rows(Var row, std::size_t rows);
Var reduce_rows(Var x);
Var broadcast_cols(Var col, std::size_t cols);
Var reduce_cols(Var x);
Var fill(Var scalar, std::size_t rows, std::size_t cols);
Var sum(Var x);
Var mean(Var x);
Var leaky_relu(Var x, double negative_slope);
Var relu(Var x);
Var tanh(Var x);
Var square(Var x);
Var safe_reciprocal(Var x);
Var row_norm(Var x);
Var softmax(Var logits);
/// Mean over rows of -log softmax(logits)[label]; labels index columns.
Var softmax_cross_entropy(Var logits, std::span<const int> labels);
Var concat_cols(Var a, Var b);
Var slice_cols(Var x, std::size_t begin, std::size_t count);
Var pad_cols(Var x, std::size_t begin, std::size_t total);

/// x W + b
inline Var linear(Var x, Var weight, Var bias) { return add_bias(matmul(x, weight), bias); }

inline Var operator+(Var a, Var b) { return add(a, b); }
inline Var operator-(Var a, Var b) { return sub(a, b); }
inline Var operator*(Var a, Var b) { return mul(a, b); }
inline Var operator-(Var a) { return scale(a, -1.0); }

}  // namespace gazsl::ad
