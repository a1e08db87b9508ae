#include "cgc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cgc/errors.hpp"

namespace cgc {

namespace {

void require_rank(const Tensor& t, std::size_t rank, const char* op) {
  if (t.rank() != rank)
    throw DimensionError(std::string(op) + ": expected rank " + std::to_string(rank) +
                         ", got shape " + shape_str(t.shape()));
}

std::size_t argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace

Var Graph::push(Tensor value, bool needs_grad,
                std::function<void(Graph&, std::uint32_t)> backprop, const char* op) {
  if (!value.all_finite())
    throw NumericError(std::string(op) + ": non-finite value in output of shape " +
                       shape_str(value.shape()));
  Node n;
  n.value = std::move(value);
  n.needs_grad = needs_grad;
  if (needs_grad) n.backprop = std::move(backprop);
  nodes_.push_back(std::move(n));
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Tensor& Graph::grad_buf(Var v) {
  auto& n = nodes_[v.id];
  if (n.param) return n.param->grad;
  if (n.grad.size() == 0) n.grad = Tensor(n.value.shape());
  return n.grad;
}

const Tensor& Graph::value(Var v) const {
  const auto& n = nodes_.at(v.id);
  return n.param ? n.param->value : n.value;
}

const Tensor& Graph::grad(Var v) const {
  const auto& n = nodes_.at(v.id);
  if (n.param) return n.param->grad;
  return n.grad;
}

// ---------------------------------------------------------------- leaves

// Parameter leaves alias the store: no copy of the value, and gradients land
// directly in the Parameter's grad buffer.
Var Graph::param(Parameter& p) {
  Node n;
  n.needs_grad = true;
  n.param = &p;
  nodes_.push_back(std::move(n));
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::constant(Tensor value) { return push(std::move(value), false, nullptr, "constant"); }

Var Graph::variable(Tensor value) {
  Tensor grad(value.shape());
  owned_.push_back(Parameter{std::move(value), std::move(grad)});
  return param(owned_.back());
}

// ---------------------------------------------------------------- backward

void Graph::backward(Var loss) {
  if (value(loss).size() != 1)
    throw DimensionError("backward: loss must be scalar, got shape " +
                         shape_str(value(loss).shape()));
  for (auto& n : nodes_) n.grad = Tensor();
  if (!nodes_[loss.id].needs_grad) return;
  grad_buf(loss)[0] += 1.0;
  for (std::int64_t i = loss.id; i >= 0; --i) {
    auto& n = nodes_[static_cast<std::size_t>(i)];
    if (!n.needs_grad || n.grad.size() == 0) continue;
    if (n.backprop) n.backprop(*this, static_cast<std::uint32_t>(i));
  }
}

// ---------------------------------------------------------------- linear algebra

Var Graph::matmul(Var a, Var b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  if (A.rank() != 2 || B.shape()[0] != A.shape()[1])
    throw DimensionError("matmul: incompatible shapes " + shape_str(A.shape()) + " and " +
                         shape_str(B.shape()));
  const std::size_t m = A.shape()[0], k = A.shape()[1];
  const std::size_t n = B.rank() == 2 ? B.shape()[1] : 1;
  Tensor out(B.rank() == 2 ? Shape{m, n} : Shape{m});
  {
    const double* pa = A.raw().data();
    const double* pb = B.raw().data();
    double* po = out.raw().data();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t p = 0; p < k; ++p) {
        const double av = pa[i * k + p];
        if (av == 0.0) continue;
        const double* brow = pb + p * n;
        double* orow = po + i * n;
        for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
      }
  }
  return push(std::move(out), needs(a) || needs(b),
              [a, b, m, k, n](Graph& g, std::uint32_t self) {
                const double* gy = g.nodes_[self].grad.raw().data();
                if (g.needs(a)) {
                  const double* pb = g.value(b).raw().data();
                  double* ga = g.grad_buf(a).raw().data();
                  for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t p = 0; p < k; ++p) {
                      double s = 0.0;
                      for (std::size_t j = 0; j < n; ++j) s += gy[i * n + j] * pb[p * n + j];
                      ga[i * k + p] += s;
                    }
                }
                if (g.needs(b)) {
                  const double* pa = g.value(a).raw().data();
                  double* gb = g.grad_buf(b).raw().data();
                  for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t p = 0; p < k; ++p) {
                      const double av = pa[i * k + p];
                      for (std::size_t j = 0; j < n; ++j) gb[p * n + j] += av * gy[i * n + j];
                    }
                }
              },
              "matmul");
}

Var Graph::transpose(Var a) {
  const Tensor& A = value(a);
  require_rank(A, 2, "transpose");
  const std::size_t r = A.shape()[0], c = A.shape()[1];
  Tensor out({c, r});
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out.at(j, i) = A.at(i, j);
  return push(std::move(out), needs(a),
              [a, r, c](Graph& g, std::uint32_t self) {
                const Tensor& gy = g.nodes_[self].grad;
                Tensor& ga = g.grad_buf(a);
                for (std::size_t i = 0; i < r; ++i)
                  for (std::size_t j = 0; j < c; ++j) ga.at(i, j) += gy.at(j, i);
              },
              "transpose");
}

// ---------------------------------------------------------------- elementwise

Var Graph::binary(Var a, Var b, int kind, const char* op) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  const bool same = A.shape() == B.shape();
  if (!same && !A.is_scalar() && !B.is_scalar())
    throw DimensionError(std::string(op) + ": cannot broadcast " + shape_str(A.shape()) +
                         " with " + shape_str(B.shape()));
  const bool a_bcast = !same && A.is_scalar();
  const bool b_bcast = !same && B.is_scalar();
  Tensor out(a_bcast ? B.shape() : A.shape());
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = A[a_bcast ? 0 : i];
    const double y = B[b_bcast ? 0 : i];
    out[i] = kind == 0 ? x + y : kind == 1 ? x - y : x * y;
  }
  return push(std::move(out), needs(a) || needs(b),
              [a, b, kind, a_bcast, b_bcast, n](Graph& g, std::uint32_t self) {
                const Tensor& gy = g.nodes_[self].grad;
                if (g.needs(a)) {
                  Tensor& ga = g.grad_buf(a);
                  const Tensor& B = g.value(b);
                  for (std::size_t i = 0; i < n; ++i) {
                    const double d = kind == 2 ? B[b_bcast ? 0 : i] : 1.0;
                    ga[a_bcast ? 0 : i] += gy[i] * d;
                  }
                }
                if (g.needs(b)) {
                  Tensor& gb = g.grad_buf(b);
                  const Tensor& A = g.value(a);
                  for (std::size_t i = 0; i < n; ++i) {
                    const double d = kind == 2 ? A[a_bcast ? 0 : i] : kind == 1 ? -1.0 : 1.0;
                    gb[b_bcast ? 0 : i] += gy[i] * d;
                  }
                }
              },
              op);
}

Var Graph::add(Var a, Var b) { return binary(a, b, 0, "add"); }
Var Graph::sub(Var a, Var b) { return binary(a, b, 1, "sub"); }
Var Graph::mul(Var a, Var b) { return binary(a, b, 2, "mul"); }

// df receives the input x and the output y.
Var Graph::unary(Var a, const char* op, double (*f)(double), double (*df)(double, double)) {
  Tensor out = value(a);
  for (auto& v : out.raw()) v = f(v);
  return push(std::move(out), needs(a),
              [a, df](Graph& g, std::uint32_t self) {
                const auto& gy = g.nodes_[self].grad.raw();
                const auto& y = g.nodes_[self].value.raw();
                const auto& x = g.value(a).raw();
                auto& ga = g.grad_buf(a).raw();
                for (std::size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i] * df(x[i], y[i]);
              },
              op);
}

Var Graph::neg(Var a) {
  return unary(
      a, "neg", [](double x) { return -x; }, [](double, double) { return -1.0; });
}

Var Graph::tanh(Var a) {
  return unary(
      a, "tanh", [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Var Graph::sigmoid(Var a) {
  return unary(
      a, "sigmoid",
      [](double x) {
        if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Var Graph::relu(Var a) {
  return unary(
      a, "relu", [](double x) { return x > 0 ? x : 0.0; },
      [](double x, double) { return x > 0 ? 1.0 : 0.0; });
}

Var Graph::exp(Var a) {
  return unary(
      a, "exp", [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Var Graph::log(Var a) {
  for (double v : value(a).raw())
    if (!(v > 0.0)) throw DomainError("log: non-positive input " + std::to_string(v));
  return unary(
      a, "log", [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Var Graph::scale(Var a, double k) {
  Tensor out = value(a);
  for (auto& v : out.raw()) v *= k;
  return push(std::move(out), needs(a),
              [a, k](Graph& g, std::uint32_t self) {
                const auto& gy = g.nodes_[self].grad.raw();
                auto& ga = g.grad_buf(a).raw();
                for (std::size_t i = 0; i < gy.size(); ++i) ga[i] += k * gy[i];
              },
              "scale");
}

Var Graph::add_scalar(Var a, double k) {
  Tensor out = value(a);
  for (auto& v : out.raw()) v += k;
  return push(std::move(out), needs(a),
              [a](Graph& g, std::uint32_t self) {
                const auto& gy = g.nodes_[self].grad.raw();
                auto& ga = g.grad_buf(a).raw();
                for (std::size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i];
              },
              "add_scalar");
}

Var Graph::clamp_min(Var a, double floor) {
  Tensor out = value(a);
  for (auto& v : out.raw()) v = std::max(v, floor);
  return push(std::move(out), needs(a),
              [a, floor](Graph& g, std::uint32_t self) {
                const auto& gy = g.nodes_[self].grad.raw();
                const auto& x = g.value(a).raw();
                auto& ga = g.grad_buf(a).raw();
                for (std::size_t i = 0; i < gy.size(); ++i)
                  if (x[i] > floor) ga[i] += gy[i];
              },
              "clamp_min");
}

// ---------------------------------------------------------------- reductions

Var Graph::sum(Var a) {
  double s = 0.0;
  for (double v : value(a).raw()) s += v;
  return push(Tensor::scalar(s), needs(a),
              [a](Graph& g, std::uint32_t self) {
                const double gy = g.nodes_[self].grad[0];
                for (auto& v : g.grad_buf(a).raw()) v += gy;
              },
              "sum");
}

Var Graph::mean(Var a) { return scale(sum(a), 1.0 / static_cast<double>(value(a).size())); }

Var Graph::dot(Var a, Var b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  if (A.shape() != B.shape())
    throw DimensionError("dot: shapes " + shape_str(A.shape()) + " and " + shape_str(B.shape()));
  double s = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) s += A[i] * B[i];
  return push(Tensor::scalar(s), needs(a) || needs(b),
              [a, b](Graph& g, std::uint32_t self) {
                const double gy = g.nodes_[self].grad[0];
                if (g.needs(a)) {
                  auto& ga = g.grad_buf(a).raw();
                  const auto& bv = g.value(b).raw();
                  for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += gy * bv[i];
                }
                if (g.needs(b)) {
                  auto& gb = g.grad_buf(b).raw();
                  const auto& av = g.value(a).raw();
                  for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += gy * av[i];
                }
              },
              "dot");
}

Var Graph::pick(Var a, std::size_t index) {
  const std::size_t idx[] = {index};
  return sum_at(a, idx);
}

Var Graph::sum_at(Var a, std::span<const std::size_t> indices) {
  const Tensor& A = value(a);
  double s = 0.0;
  for (auto i : indices) {
    if (i >= A.size())
      throw IndexError("sum_at: index " + std::to_string(i) + " out of range for shape " +
                       shape_str(A.shape()));
    s += A[i];
  }
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  return push(Tensor::scalar(s), needs(a),
              [a, idx = std::move(idx)](Graph& g, std::uint32_t self) {
                const double gy = g.nodes_[self].grad[0];
                auto& ga = g.grad_buf(a);
                for (auto i : idx) ga[i] += gy;
              },
              "sum_at");
}

// ---------------------------------------------------------------- normalization

Var Graph::softmax(Var x, const std::vector<bool>* mask) {
  const Tensor& X = value(x);
  require_rank(X, 1, "softmax");
  const std::size_t n = X.size();
  if (mask && mask->size() != n)
    throw DimensionError("softmax: mask length " + std::to_string(mask->size()) +
                         " vs input " + shape_str(X.shape()));
  auto live = [&](std::size_t i) { return !mask || (*mask)[i]; };
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (live(i)) mx = std::max(mx, X[i]);
  if (!std::isfinite(mx)) throw DomainError("softmax: every entry is masked");
  Tensor out({n});
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (live(i)) z += (out[i] = std::exp(X[i] - mx));
  for (auto& v : out.raw()) v /= z;
  return push(std::move(out), needs(x),
              [x](Graph& g, std::uint32_t self) {
                const auto& gy = g.nodes_[self].grad.raw();
                const auto& y = g.nodes_[self].value.raw();
                double s = 0.0;
                for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * gy[i];
                auto& gx = g.grad_buf(x).raw();
                for (std::size_t i = 0; i < y.size(); ++i) gx[i] += y[i] * (gy[i] - s);
              },
              "softmax");
}

Var Graph::log_softmax(Var x) {
  const Tensor& X = value(x);
  require_rank(X, 1, "log_softmax");
  double mx = *std::max_element(X.raw().begin(), X.raw().end());
  double z = 0.0;
  for (double v : X.raw()) z += std::exp(v - mx);
  const double lse = mx + std::log(z);
  Tensor out = X;
  for (auto& v : out.raw()) v -= lse;
  return push(std::move(out), needs(x),
              [x](Graph& g, std::uint32_t self) {
                const auto& gy = g.nodes_[self].grad.raw();
                const auto& y = g.nodes_[self].value.raw();
                double s = 0.0;
                for (double v : gy) s += v;
                auto& gx = g.grad_buf(x).raw();
                for (std::size_t i = 0; i < y.size(); ++i) gx[i] += gy[i] - std::exp(y[i]) * s;
              },
              "log_softmax");
}

Var Graph::softmax_rows(Var x) {
  const Tensor& X = value(x);
  require_rank(X, 2, "softmax_rows");
  const std::size_t r = X.shape()[0], c = X.shape()[1];
  Tensor out({r, c});
  for (std::size_t i = 0; i < r; ++i) {
    double mx = X.at(i, 0);
    for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, X.at(i, j));
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j) z += (out.at(i, j) = std::exp(X.at(i, j) - mx));
    for (std::size_t j = 0; j < c; ++j) out.at(i, j) /= z;
  }
  return push(std::move(out), needs(x),
              [x, r, c](Graph& g, std::uint32_t self) {
                const Tensor& gy = g.nodes_[self].grad;
                const Tensor& y = g.nodes_[self].value;
                Tensor& gx = g.grad_buf(x);
                for (std::size_t i = 0; i < r; ++i) {
                  double s = 0.0;
                  for (std::size_t j = 0; j < c; ++j) s += y.at(i, j) * gy.at(i, j);
                  for (std::size_t j = 0; j < c; ++j) gx.at(i, j) += y.at(i, j) * (gy.at(i, j) - s);
                }
              },
              "softmax_rows");
}

// ---------------------------------------------------------------- structure

Var Graph::concat(std::initializer_list<Var> parts, std::size_t axis) {
  return concat(std::span<const Var>(parts.begin(), parts.size()), axis);
}

Var Graph::concat(std::span<const Var> parts, std::size_t axis) {
  if (parts.empty()) throw DimensionError("concat: no inputs");
  const std::size_t rank = value(parts[0]).rank();
  for (auto p : parts)
    if (value(p).rank() != rank)
      throw DimensionError("concat: mixed ranks " + shape_str(value(parts[0]).shape()) +
                           " and " + shape_str(value(p).shape()));
  if (axis >= rank) throw DimensionError("concat: axis out of range");
  std::vector<Var> inputs(parts.begin(), parts.end());
  bool any = false;
  for (auto p : parts) any = any || needs(p);

  if (rank == 1 || axis == 0) {
    // Row-major layout makes both cases a flat append.
    const std::size_t cols = rank == 2 ? value(parts[0]).shape()[1] : 1;
    std::vector<double> vals;
    std::size_t rows = 0;
    for (auto p : parts) {
      const Tensor& t = value(p);
      if (rank == 2 && t.shape()[1] != cols)
        throw DimensionError("concat: column mismatch " + shape_str(value(parts[0]).shape()) +
                             " and " + shape_str(t.shape()));
      vals.insert(vals.end(), t.raw().begin(), t.raw().end());
      rows += t.shape()[0];
    }
    Tensor out(rank == 2 ? Shape{rows, cols} : Shape{rows}, std::move(vals));
    return push(std::move(out), any,
                [inputs](Graph& g, std::uint32_t self) {
                  const auto& gy = g.nodes_[self].grad.raw();
                  std::size_t off = 0;
                  for (auto p : inputs) {
                    const std::size_t n = g.value(p).size();
                    if (g.needs(p)) {
                      auto& gp = g.grad_buf(p).raw();
                      for (std::size_t i = 0; i < n; ++i) gp[i] += gy[off + i];
                    }
                    off += n;
                  }
                },
                "concat");
  }

  const std::size_t rows = value(parts[0]).shape()[0];
  std::size_t cols = 0;
  for (auto p : parts) {
    if (value(p).shape()[0] != rows)
      throw DimensionError("concat: row mismatch " + shape_str(value(parts[0]).shape()) +
                           " and " + shape_str(value(p).shape()));
    cols += value(p).shape()[1];
  }
  Tensor out({rows, cols});
  std::size_t off = 0;
  for (auto p : parts) {
    const Tensor& t = value(p);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < t.shape()[1]; ++j) out.at(i, off + j) = t.at(i, j);
    off += t.shape()[1];
  }
  return push(std::move(out), any,
              [inputs, rows](Graph& g, std::uint32_t self) {
                const Tensor& gy = g.nodes_[self].grad;
                std::size_t off = 0;
                for (auto p : inputs) {
                  const std::size_t c = g.value(p).shape()[1];
                  if (g.needs(p)) {
                    Tensor& gp = g.grad_buf(p);
                    for (std::size_t i = 0; i < rows; ++i)
                      for (std::size_t j = 0; j < c; ++j) gp.at(i, j) += gy.at(i, off + j);
                  }
                  off += c;
                }
              },
              "concat");
}

Var Graph::slice(Var a, std::size_t start, std::size_t len) {
  const Tensor& A = value(a);
  require_rank(A, 1, "slice");
  if (len == 0 || start + len > A.size())
    throw IndexError("slice [" + std::to_string(start) + ", " + std::to_string(start + len) +
                     ") out of range for shape " + shape_str(A.shape()));
  std::vector<double> vals(A.raw().begin() + static_cast<std::ptrdiff_t>(start),
                           A.raw().begin() + static_cast<std::ptrdiff_t>(start + len));
  return push(Tensor::vector(std::move(vals)), needs(a),
              [a, start](Graph& g, std::uint32_t self) {
                const auto& gy = g.nodes_[self].grad.raw();
                auto& ga = g.grad_buf(a).raw();
                for (std::size_t i = 0; i < gy.size(); ++i) ga[start + i] += gy[i];
              },
              "slice");
}

Var Graph::row(Var a, std::size_t r) {
  const Tensor& A = value(a);
  require_rank(A, 2, "row");
  return gather_row(a, r);
}

Var Graph::stack_rows(std::span<const Var> rows) {
  if (rows.empty()) throw DimensionError("stack_rows: no inputs");
  const std::size_t d = value(rows[0]).size();
  std::vector<double> vals;
  vals.reserve(rows.size() * d);
  bool any = false;
  for (auto r : rows) {
    const Tensor& t = value(r);
    if (t.rank() != 1 || t.size() != d)
      throw DimensionError("stack_rows: row shape " + shape_str(t.shape()) + " vs [" +
                           std::to_string(d) + "]");
    vals.insert(vals.end(), t.raw().begin(), t.raw().end());
    any = any || needs(r);
  }
  std::vector<Var> inputs(rows.begin(), rows.end());
  return push(Tensor::matrix(rows.size(), d, std::move(vals)), any,
              [inputs, d](Graph& g, std::uint32_t self) {
                const auto& gy = g.nodes_[self].grad.raw();
                for (std::size_t r = 0; r < inputs.size(); ++r) {
                  if (!g.needs(inputs[r])) continue;
                  auto& gr = g.grad_buf(inputs[r]).raw();
                  for (std::size_t j = 0; j < d; ++j) gr[j] += gy[r * d + j];
                }
              },
              "stack_rows");
}

Var Graph::gather(Var table, std::span<const std::size_t> ids) {
  const Tensor& T = value(table);
  require_rank(T, 2, "gather");
  const std::size_t v = T.shape()[0], d = T.shape()[1];
  if (ids.empty()) throw DimensionError("gather: empty id list");
  std::vector<double> vals;
  vals.reserve(ids.size() * d);
  for (auto id : ids) {
    if (id >= v)
      throw IndexError("gather: id " + std::to_string(id) + " out of range for table " +
                       shape_str(T.shape()));
    vals.insert(vals.end(), T.raw().begin() + static_cast<std::ptrdiff_t>(id * d),
                T.raw().begin() + static_cast<std::ptrdiff_t>((id + 1) * d));
  }
  std::vector<std::size_t> idv(ids.begin(), ids.end());
  return push(Tensor::matrix(ids.size(), d, std::move(vals)), needs(table),
              [table, idv = std::move(idv), d](Graph& g, std::uint32_t self) {
                const auto& gy = g.nodes_[self].grad.raw();
                auto& gt = g.grad_buf(table).raw();
                for (std::size_t r = 0; r < idv.size(); ++r)
                  for (std::size_t j = 0; j < d; ++j) gt[idv[r] * d + j] += gy[r * d + j];
              },
              "gather");
}

Var Graph::gather_row(Var table, std::size_t id) {
  const Tensor& T = value(table);
  require_rank(T, 2, "gather_row");
  const std::size_t d = T.shape()[1];
  if (id >= T.shape()[0])
    throw IndexError("gather: id " + std::to_string(id) + " out of range for table " +
                     shape_str(T.shape()));
  std::vector<double> vals(T.raw().begin() + static_cast<std::ptrdiff_t>(id * d),
                           T.raw().begin() + static_cast<std::ptrdiff_t>((id + 1) * d));
  return push(Tensor::vector(std::move(vals)), needs(table),
              [table, id, d](Graph& g, std::uint32_t self) {
                const auto& gy = g.nodes_[self].grad.raw();
                auto& gt = g.grad_buf(table).raw();
                for (std::size_t j = 0; j < d; ++j) gt[id * d + j] += gy[j];
              },
              "gather_row");
}

Var Graph::add_row_bias(Var m, Var bias) {
  const Tensor& M = value(m);
  const Tensor& B = value(bias);
  require_rank(M, 2, "add_row_bias");
  const std::size_t r = M.shape()[0], c = M.shape()[1];
  if (B.rank() != 1 || B.size() != c)
    throw DimensionError("add_row_bias: bias " + shape_str(B.shape()) + " vs matrix " +
                         shape_str(M.shape()));
  Tensor out = M;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out.at(i, j) += B[j];
  return push(std::move(out), needs(m) || needs(bias),
              [m, bias, r, c](Graph& g, std::uint32_t self) {
                const auto& gy = g.nodes_[self].grad.raw();
                if (g.needs(m)) {
                  auto& gm = g.grad_buf(m).raw();
                  for (std::size_t i = 0; i < gy.size(); ++i) gm[i] += gy[i];
                }
                if (g.needs(bias)) {
                  auto& gb = g.grad_buf(bias).raw();
                  for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < c; ++j) gb[j] += gy[i * c + j];
                }
              },
              "add_row_bias");
}

Var Graph::propagate(Var x, const std::vector<std::vector<Edge>>& neighbours) {
  const Tensor& X = value(x);
  require_rank(X, 2, "propagate");
  const std::size_t n = X.shape()[0], d = X.shape()[1];
  if (neighbours.size() != n)
    throw DimensionError("propagate: " + std::to_string(neighbours.size()) +
                         " adjacency rows for input " + shape_str(X.shape()));
  Tensor out({n, d});
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& e : neighbours[i]) {
      if (e.to >= n) throw IndexError("propagate: neighbour index out of range");
      for (std::size_t j = 0; j < d; ++j) out.at(i, j) += e.weight * X.at(e.to, j);
    }
  return push(std::move(out), needs(x),
              [x, neighbours, d](Graph& g, std::uint32_t self) {
                const Tensor& gy = g.nodes_[self].grad;
                Tensor& gx = g.grad_buf(x);
                for (std::size_t i = 0; i < neighbours.size(); ++i)
                  for (const auto& e : neighbours[i])
                    for (std::size_t j = 0; j < d; ++j) gx.at(e.to, j) += e.weight * gy.at(i, j);
              },
              "propagate");
}

// ---------------------------------------------------------------- model-specific

Var Graph::dropout(Var x, double p, Mode mode, Rng& rng) {
  if (!(p >= 0.0 && p < 1.0)) throw ConfigError("dropout rate must be in [0, 1), got " + std::to_string(p));
  if (mode == Mode::Eval || p == 0.0) return x;
  const Tensor& X = value(x);
  std::bernoulli_distribution keep(1.0 - p);
  const double s = 1.0 / (1.0 - p);
  std::vector<double> m(X.size());
  for (auto& v : m) v = keep(rng) ? s : 0.0;
  Tensor out = X;
  for (std::size_t i = 0; i < m.size(); ++i) out[i] *= m[i];
  return push(std::move(out), needs(x),
              [x, m = std::move(m)](Graph& g, std::uint32_t self) {
                const auto& gy = g.nodes_[self].grad.raw();
                auto& gx = g.grad_buf(x).raw();
                for (std::size_t i = 0; i < gy.size(); ++i) gx[i] += gy[i] * m[i];
              },
              "dropout");
}

Var Graph::maxout_pairs(Var x) {
  const Tensor& X = value(x);
  require_rank(X, 1, "maxout_pairs");
  if (X.size() % 2 != 0)
    throw DimensionError("maxout_pairs: odd input width " + shape_str(X.shape()));
  const std::size_t half = X.size() / 2;
  Tensor out({half});
  std::vector<std::size_t> src(half);
  for (std::size_t j = 0; j < half; ++j) {
    src[j] = X[2 * j] >= X[2 * j + 1] ? 2 * j : 2 * j + 1;
    out[j] = X[src[j]];
  }
  return push(std::move(out), needs(x),
              [x, src = std::move(src)](Graph& g, std::uint32_t self) {
                const auto& gy = g.nodes_[self].grad.raw();
                auto& gx = g.grad_buf(x).raw();
                for (std::size_t j = 0; j < src.size(); ++j) gx[src[j]] += gy[j];
              },
              "maxout_pairs");
}

Var Graph::straight_through(Var y) {
  const Tensor& Y = value(y);
  Tensor out(Y.shape());
  const std::size_t rows = Y.rank() == 2 ? Y.shape()[0] : 1;
  const std::size_t cols = Y.rank() == 2 ? Y.shape()[1] : Y.size();
  for (std::size_t r = 0; r < rows; ++r) {
    auto rowv = Y.values().subspan(r * cols, cols);
    out[r * cols + argmax(rowv)] = 1.0;
  }
  return push(std::move(out), needs(y),
              [y](Graph& g, std::uint32_t self) {
                const auto& gy = g.nodes_[self].grad.raw();
                auto& gx = g.grad_buf(y).raw();
                for (std::size_t i = 0; i < gy.size(); ++i) gx[i] += gy[i];
              },
              "straight_through");
}

}  // namespace cgc
