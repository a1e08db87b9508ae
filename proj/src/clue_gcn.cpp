#include "cgc/clue_gcn.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cgc/errors.hpp"

namespace cgc {

DependencyAdjacency build_adjacency(const AnnotatedExample& ex) {
  const std::size_t n = ex.passage.size();
  DependencyAdjacency adj;
  adj.tilde = Tensor::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t h = ex.passage[i].head;
    if (h == i) continue;
    adj.tilde.at(i, h) = 1.0;
    adj.tilde.at(h, i) = 1.0;
  }
  adj.degree.assign(n, 0.0);
  adj.normalized.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) adj.degree[i] += adj.tilde.at(i, j);
    for (std::size_t j = 0; j < n; ++j)
      if (adj.tilde.at(i, j) != 0.0) adj.normalized[i].push_back({j, adj.tilde.at(i, j) / adj.degree[i]});
  }
  return adj;
}

Var gcn_layer(Graph& g, Var h, const DependencyAdjacency& adj, Var w, Var b, bool relu) {
  const auto& hs = g.value(h).shape();
  const auto& ws = g.value(w).shape();
  if (hs.size() != 2 || ws.size() != 2 || hs[1] != ws[0] || hs[0] != adj.size())
    throw DimensionError("gcn_layer: input " + shape_str(hs) + ", weight " + shape_str(ws) +
                         ", " + std::to_string(adj.size()) + " nodes");
  auto mixed = g.add_row_bias(g.propagate(g.matmul(h, w), adj.normalized), b);
  return relu ? g.relu(mixed) : mixed;
}

Var encode_clue_features(Graph& g, ParamStore& params, Var x, const DependencyAdjacency& adj,
                         int layers) {
  if (layers < 1) throw ConfigError("GCN needs at least one layer");
  Var h = x;
  for (int l = 0; l < layers; ++l) {
    const std::string p = "clue.gcn" + std::to_string(l);
    h = gcn_layer(g, h, adj, g.param(params.get(p + ".W")), g.param(params.get(p + ".b")));
  }
  return h;
}

Var clue_logits(Graph& g, Var h, Var w_out, Var b_out) {
  return g.add_row_bias(g.matmul(h, w_out), b_out);
}

Tensor gumbel_noise(const Shape& shape, Rng& rng) {
  Tensor t(shape);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (auto& v : t.raw()) {
    double u = u01(rng);
    if (u <= 0.0) u = std::numeric_limits<double>::min();
    v = -std::log(-std::log(u));
  }
  return t;
}

Var gumbel_softmax_sample(Graph& g, Var scores, double tau, Rng& rng, const Tensor* noise) {
  if (!(tau > 0)) throw ConfigError("Gumbel-Softmax temperature must be positive, got " + std::to_string(tau));
  // copy: later pushes may move the node storage
  const Shape shape = g.value(scores).shape();
  Tensor gn = noise ? *noise : gumbel_noise(shape, rng);
  if (gn.shape() != shape)
    throw DimensionError("gumbel noise " + shape_str(gn.shape()) + " vs scores " + shape_str(shape));
  auto perturbed = g.scale(g.add(scores, g.constant(std::move(gn))), 1.0 / tau);
  if (shape.size() == 1) return g.softmax(perturbed);
  return g.softmax_rows(perturbed);
}

CluePrediction predict_clues(Graph& g, ParamStore& params, const ModelConfig& cfg, Var features,
                             const DependencyAdjacency& adj, Mode mode, Rng& rng) {
  auto h = encode_clue_features(g, params, features, adj, cfg.gcn_layers);
  CluePrediction out;
  out.logits = clue_logits(g, h, g.param(params.get("clue.out.W")), g.param(params.get("clue.out.b")));
  const Tensor& lv = g.value(out.logits);
  const std::size_t n = lv.rows();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = lv.at(i, 1) - lv.at(i, 0);
    out.clue_prob.push_back(d >= 0 ? 1.0 / (1.0 + std::exp(-d)) : std::exp(d) / (1.0 + std::exp(d)));
  }
  if (mode == Mode::Train) {
    out.indicator = st_discretize(g, gumbel_softmax_sample(g, out.logits, cfg.tau, rng));
  } else {
    Tensor onehot({n, 2});
    for (std::size_t i = 0; i < n; ++i) onehot.at(i, lv.at(i, 1) > lv.at(i, 0) ? 1 : 0) = 1.0;
    out.indicator = g.constant(std::move(onehot));
  }
  const Tensor& ind = g.value(out.indicator);
  for (std::size_t i = 0; i < n; ++i) out.is_clue.push_back(ind.at(i, 1) == 1.0);
  return out;
}

void add_clue_params(ParamStore& store, const ModelConfig& cfg, Rng& rng) {
  const double r = cfg.init_range;
  auto weight = [&](std::size_t rows, std::size_t cols) {
    Tensor t({rows, cols});
    for (auto& v : t.raw()) v = uniform(rng, -r, r);
    return t;
  };
  std::size_t in = static_cast<std::size_t>(cfg.clue_input_width());
  const auto hid = static_cast<std::size_t>(cfg.gcn_hidden);
  for (int l = 0; l < cfg.gcn_layers; ++l) {
    const std::string p = "clue.gcn" + std::to_string(l);
    store.add(p + ".W", weight(in, hid));
    store.add(p + ".b", Tensor({hid}));
    in = hid;
  }
  store.add("clue.out.W", weight(hid, 2));
  store.add("clue.out.b", Tensor({2}));
}

}  // namespace cgc
