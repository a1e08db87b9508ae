#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cgc/param_store.hpp"
#include "cgc/rng.hpp"
#include "cgc/tensor.hpp"

namespace cgc {

// Handle to a node of a Graph. Only meaningful for the graph that created it.
struct Var {
  std::uint32_t id = 0;
};

enum class Mode { Train, Eval };

// Append-only tape for reverse-mode differentiation. Every op evaluates
// eagerly, stores its output, and registers a closure that pushes the output
// gradient back to its inputs. backward() walks the tape in reverse append
// order, so each node is visited once.
//
// Leaves created with param() write their gradient into the Parameter's grad
// buffer additively; the caller zeroes grads between steps.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  // -- leaves
  Var param(Parameter& p);
  Var constant(Tensor value);
  // Differentiable leaf owned by the graph; its gradient is grad(v).
  Var variable(Tensor value);

  // -- linear algebra
  // a[m×k]·b[k×n] -> [m×n]; a[m×k]·b[k] -> [m].
  Var matmul(Var a, Var b);
  Var transpose(Var a);

  // -- elementwise; operands share a shape or one of them is a scalar
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var neg(Var a);
  Var tanh(Var a);
  Var sigmoid(Var a);
  Var relu(Var a);
  Var exp(Var a);
  Var log(Var a);
  Var scale(Var a, double k);
  Var add_scalar(Var a, double k);
  // max(a, floor) with zero gradient where the floor is active.
  Var clamp_min(Var a, double floor);

  // -- reductions and selection
  Var sum(Var a);
  Var mean(Var a);
  Var dot(Var a, Var b);
  Var pick(Var a, std::size_t index);
  Var sum_at(Var a, std::span<const std::size_t> indices);

  // -- normalization over a rank-1 tensor; masked entries (mask[i] == false) are exactly 0
  Var softmax(Var x, const std::vector<bool>* mask = nullptr);
  Var log_softmax(Var x);
  // Row-wise softmax over a [n×k] matrix.
  Var softmax_rows(Var x);

  // -- structure
  Var concat(std::span<const Var> parts, std::size_t axis = 0);
  Var concat(std::initializer_list<Var> parts, std::size_t axis = 0);
  Var slice(Var a, std::size_t start, std::size_t len);
  Var row(Var a, std::size_t r);
  Var stack_rows(std::span<const Var> rows);
  Var gather(Var table, std::span<const std::size_t> ids);
  Var gather_row(Var table, std::size_t id);
  Var add_row_bias(Var m, Var bias);

  // out_i = Σ_{j ∈ nbrs(i)} weight_ij · x_j for a [n×d] matrix x. neighbours[i]
  // lists (j, weight) pairs.
  struct Edge {
    std::size_t to;
    double weight;
  };
  Var propagate(Var x, const std::vector<std::vector<Edge>>& neighbours);

  // -- model-specific
  Var dropout(Var x, double p, Mode mode, Rng& rng);
  // Pairwise max over consecutive entries of an even-length vector.
  Var maxout_pairs(Var x);
  // Forward one-hot at argmax of each row (ties to the lower index); backward identity.
  Var straight_through(Var y);

  // -- evaluation
  const Tensor& value(Var v) const;
  const Tensor& grad(Var v) const;
  std::size_t size() const { return nodes_.size(); }
  void backward(Var loss);

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool needs_grad = false;
    Parameter* param = nullptr;
    std::function<void(Graph&, std::uint32_t)> backprop;
  };

  Var push(Tensor value, bool needs_grad, std::function<void(Graph&, std::uint32_t)> backprop,
           const char* op);
  bool needs(Var v) const { return nodes_[v.id].needs_grad; }
  Tensor& grad_buf(Var v);
  Var unary(Var a, const char* op, double (*f)(double), double (*df)(double x, double y));
  Var binary(Var a, Var b, int kind, const char* op);

  std::deque<Node> nodes_;  // deque: values stay put while the tape grows
  std::deque<Parameter> owned_;
};

}  // namespace cgc
