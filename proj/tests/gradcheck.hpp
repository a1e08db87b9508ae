#pragma once

// Central finite-difference oracle shared by the gradient tests. It never
// touches Graph internals: it only re-evaluates the scalar loss with perturbed
// parameter values.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "cgc/graph.hpp"
#include "cgc/param_store.hpp"

namespace cgc::testing {

struct GradCheckResult {
  double worst_rel_error = 0.0;
  std::string worst_param;
};

// Relative error ||analytic − numeric|| / max(||analytic|| + ||numeric||, 1e-12),
// computed per parameter tensor; reports the worst tensor.
inline GradCheckResult grad_check(ParamStore& store,
                                  const std::function<Var(Graph&)>& build_loss,
                                  double step = 1e-5) {
  store.zero_grad();
  {
    Graph g;
    Var loss = build_loss(g);
    g.backward(loss);
  }
  auto eval = [&] {
    Graph g;
    return g.value(build_loss(g)).item();
  };
  GradCheckResult out;
  for (auto& [name, p] : store) {
    double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double orig = p.value[i];
      p.value[i] = orig + step;
      const double up = eval();
      p.value[i] = orig - step;
      const double down = eval();
      p.value[i] = orig;
      const double numeric = (up - down) / (2 * step);
      const double analytic = p.grad[i];
      diff2 += (analytic - numeric) * (analytic - numeric);
      a2 += analytic * analytic;
      n2 += numeric * numeric;
    }
    const double rel = std::sqrt(diff2) / std::max(std::sqrt(a2) + std::sqrt(n2), 1e-12);
    if (rel >= out.worst_rel_error) {
      out.worst_rel_error = rel;
      out.worst_param = name;
    }
  }
  return out;
}

inline Tensor random_tensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  for (auto& v : t.raw()) v = uniform(rng, lo, hi);
  return t;
}

}  // namespace cgc::testing
