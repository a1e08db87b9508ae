#include <gtest/gtest.h>

#include <cmath>
#include <deque>

#include "cgc/clue_gcn.hpp"
#include "cgc/errors.hpp"
#include "fixtures.hpp"
#include "gradcheck.hpp"

using namespace cgc;
using namespace cgc::testing;

namespace {

AnnotatedExample tree(const std::vector<std::size_t>& heads) {
  std::string text;
  for (std::size_t i = 0; i < heads.size(); ++i) text += "w" + std::to_string(i) + " ";
  return make_example(text, "q", {0, 0}, heads);
}

// random tree: node i > 0 attaches to a uniformly chosen earlier node, then labels are permuted
std::vector<std::size_t> random_heads(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::size_t> heads(n);
  heads[perm[0]] = perm[0];
  for (std::size_t i = 1; i < n; ++i) heads[perm[i]] = perm[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)];
  return heads;
}

// hop counts from `from` over the undirected tree
std::vector<std::size_t> hops(const std::vector<std::size_t>& heads, std::size_t from) {
  const std::size_t n = heads.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    if (heads[i] != i) {
      adj[i].push_back(heads[i]);
      adj[heads[i]].push_back(i);
    }
  std::vector<std::size_t> d(n, n + 1);
  d[from] = 0;
  std::deque<std::size_t> q{from};
  while (!q.empty()) {
    auto u = q.front();
    q.pop_front();
    for (auto v : adj[u])
      if (d[v] > n) {
        d[v] = d[u] + 1;
        q.push_back(v);
      }
  }
  return d;
}

// relu(D⁻¹ Ã H W + b), with Ã built densely from the head list
Tensor dense_gcn(const std::vector<std::size_t>& heads, const Tensor& h, const Tensor& w, const Tensor& b) {
  const std::size_t n = heads.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] = 1.0;
    a[i][heads[i]] = a[heads[i]][i] = 1.0;
  }
  Tensor out({n, w.cols()});
  for (std::size_t i = 0; i < n; ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < n; ++j) d += a[i][j];
    for (std::size_t c = 0; c < w.cols(); ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (a[i][j] == 0.0) continue;
        double hw = 0.0;
        for (std::size_t k = 0; k < w.rows(); ++k) hw += h.at(j, k) * w.at(k, c);
        s += a[i][j] * hw;
      }
      out.at(i, c) = std::max(0.0, s / d + b[c]);
    }
  }
  return out;
}

ParamStore gcn_params(int layers, std::size_t in, std::size_t hid, Rng& rng, double bias) {
  ParamStore ps;
  for (int l = 0; l < layers; ++l) {
    const std::string p = "clue.gcn" + std::to_string(l);
    ps.add(p + ".W", random_tensor({l == 0 ? in : hid, hid}, rng, -0.3, 0.3));
    Tensor b({hid});
    b.fill(bias);
    ps.add(p + ".b", b);
  }
  return ps;
}

}  // namespace

TEST(Adjacency, SingleToken) {
  auto adj = build_adjacency(tree({0}));
  EXPECT_EQ(adj.tilde, Tensor::matrix(1, 1, {1.0}));
  EXPECT_EQ(adj.degree, (std::vector<double>{1.0}));
}

TEST(Adjacency, ChainDegrees) {
  auto adj = build_adjacency(tree({0, 0, 1}));
  EXPECT_EQ(adj.degree, (std::vector<double>{2, 3, 2}));
}

TEST(Adjacency, SymmetricWithUnitTrace) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 9;
    auto adj = build_adjacency(tree(random_heads(n, rng)));
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      trace += adj.tilde.at(i, i);
      for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(adj.tilde.at(i, j), adj.tilde.at(j, i));
    }
    EXPECT_EQ(trace, static_cast<double>(n));
  }
}

TEST(GcnLayer, IsolatedNodeIsRelu) {
  auto adj = build_adjacency(tree({0}));
  Graph g;
  auto x = g.constant(Tensor::matrix(1, 3, {-1.5, 2.0, 0.25}));
  auto out = gcn_layer(g, x, adj, g.constant(Tensor::identity(3)), g.constant(Tensor({3})));
  EXPECT_EQ(g.value(out), Tensor::matrix(1, 3, {0.0, 2.0, 0.25}));
}

TEST(GcnLayer, ThreeChainMatchesDense) {
  Rng rng(8);
  std::vector<std::size_t> heads{0, 0, 1};
  auto h = random_tensor({3, 4}, rng, -1, 1);
  auto w = random_tensor({4, 5}, rng, -1, 1);
  auto b = random_tensor({5}, rng, -0.5, 0.5);
  Graph g;
  auto out = gcn_layer(g, g.constant(h), build_adjacency(tree(heads)), g.constant(w), g.constant(b));
  auto want = dense_gcn(heads, h, w, b);
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(g.value(out)[i], want[i], 1e-12);
}

TEST(GcnLayer, RandomTreesMatchDense) {
  Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    auto heads = random_heads(8, rng);
    auto h = random_tensor({8, 6}, rng, -1, 1);
    auto w = random_tensor({6, 7}, rng, -1, 1);
    auto b = random_tensor({7}, rng, -0.5, 0.5);
    Graph g;
    auto out = gcn_layer(g, g.constant(h), build_adjacency(tree(heads)), g.constant(w), g.constant(b));
    auto want = dense_gcn(heads, h, w, b);
    for (std::size_t i = 0; i < want.size(); ++i) ASSERT_NEAR(g.value(out)[i], want[i], 1e-10);
  }
}

TEST(GcnLayer, GradientsMatchFiniteDifferences) {
  Rng rng(3);
  auto adj = build_adjacency(tree({1, 1, 1, 2, 3}));
  ParamStore ps;
  ps.add("h", random_tensor({5, 3}, rng, -1, 1));
  ps.add("w", random_tensor({3, 4}, rng, -1, 1));
  ps.add("b", random_tensor({4}, rng, 0.1, 0.6));
  auto weights = random_tensor({5, 4}, rng, -1, 1);
  auto res = grad_check(ps, [&](Graph& g) {
    auto out = gcn_layer(g, g.param(ps.get("h")), adj, g.param(ps.get("w")), g.param(ps.get("b")));
    return g.sum(g.mul(out, g.constant(weights)));
  });
  EXPECT_LT(res.worst_rel_error, 1e-4) << res.worst_param;
}

TEST(GcnLayer, ShapeMismatch) {
  auto adj = build_adjacency(tree({0, 0}));
  Graph g;
  EXPECT_THROW(gcn_layer(g, g.constant(Tensor({2, 3})), adj, g.constant(Tensor({4, 2})), g.constant(Tensor({2}))),
               DimensionError);
}

// h_i after L layers must ignore every node more than L hops away.
TEST(GcnLocality, PerturbationRespectsHopCount) {
  Rng rng(17);
  for (int layers : {1, 2, 3}) {
    for (int trial = 0; trial < 4; ++trial) {
      auto heads = trial == 0 ? std::vector<std::size_t>{0, 0, 1, 2, 3} : random_heads(9, rng);
      const std::size_t n = heads.size();
      auto adj = build_adjacency(tree(heads));
      // positive biases keep every relu active, so reachable perturbations always show
      auto ps = gcn_params(layers, 4, 5, rng, 5.0);
      auto x = random_tensor({n, 4}, rng, -1, 1);
      auto run = [&](const Tensor& in) {
        Graph g;
        return g.value(encode_clue_features(g, ps, g.constant(in), adj, layers));
      };
      const auto base = run(x);
      for (std::size_t j = 0; j < n; ++j) {
        auto xp = x;
        for (std::size_t k = 0; k < 4; ++k) xp.at(j, k) += 0.5;
        const auto pert = run(xp);
        const auto d = hops(heads, j);
        for (std::size_t i = 0; i < n; ++i) {
          bool changed = false;
          for (std::size_t c = 0; c < base.cols(); ++c) changed |= base.at(i, c) != pert.at(i, c);
          if (d[i] > static_cast<std::size_t>(layers))
            EXPECT_FALSE(changed) << "L=" << layers << " node " << i << " perturbed " << j;
          else
            EXPECT_TRUE(changed) << "L=" << layers << " node " << i << " perturbed " << j;
        }
      }
    }
  }
}

TEST(GcnLocality, ThirtyTokenSmoke) {
  ModelConfig cfg = tiny_config();
  cfg.gcn_layers = 3;
  Rng rng(2);
  auto heads = random_heads(30, rng);
  auto adj = build_adjacency(tree(heads));
  ParamStore ps;
  add_clue_params(ps, cfg, rng);
  Graph g;
  auto x = g.constant(random_tensor({30, static_cast<std::size_t>(cfg.clue_input_width())}, rng, -1, 1));
  auto out = predict_clues(g, ps, cfg, x, adj, Mode::Eval, rng);
  EXPECT_EQ(out.is_clue.size(), 30u);
  EXPECT_EQ(g.value(out.logits).shape(), (Shape{30, 2}));
}

TEST(ClueLogits, ZeroWeightsGiveHalf) {
  Rng rng(1);
  Graph g;
  auto h = g.constant(random_tensor({4, 3}, rng, -1, 1));
  auto probs = g.softmax_rows(clue_logits(g, h, g.constant(Tensor({3, 2})), g.constant(Tensor({2}))));
  for (double p : g.value(probs).raw()) EXPECT_DOUBLE_EQ(p, 0.5);
  EXPECT_EQ(g.value(probs).shape(), (Shape{4, 2}));
}

TEST(ClueLogits, LnThreeGivesThreeQuarters) {
  Graph g;
  auto h = g.constant(Tensor::matrix(1, 1, {1.0}));
  auto logits = clue_logits(g, h, g.constant(Tensor::matrix(1, 2, {0.0, std::log(3.0)})), g.constant(Tensor({2})));
  EXPECT_NEAR(g.value(g.softmax_rows(logits)).at(0, 1), 0.75, 1e-12);
}

TEST(Gumbel, ZeroNoiseEqualLogits) {
  Rng rng(1);
  for (double tau : {0.1, 1.0, 7.0}) {
    Graph g;
    Tensor zero({2});
    auto y = g.value(gumbel_softmax_sample(g, g.constant(Tensor::vector({0.0, 0.0})), tau, rng, &zero));
    EXPECT_DOUBLE_EQ(y[0], 0.5);
    EXPECT_DOUBLE_EQ(y[1], 0.5);
  }
}

TEST(Gumbel, LowTemperatureLimit) {
  Rng rng(1);
  Graph g;
  Tensor zero({2});
  auto y = g.value(gumbel_softmax_sample(g, g.constant(Tensor::vector({5.0, 0.0})), 0.01, rng, &zero));
  EXPECT_GT(std::max(y[0], y[1]), 0.99);
}

TEST(Gumbel, NonPositiveTemperature) {
  Rng rng(1);
  Graph g;
  EXPECT_THROW(gumbel_softmax_sample(g, g.constant(Tensor::vector({1.0, 0.0})), 0.0, rng), ConfigError);
}

namespace {

std::vector<double> argmax_frequencies(const std::vector<double>& logits, int samples, Rng& rng) {
  std::vector<double> counts(logits.size(), 0.0);
  for (int s = 0; s < samples; ++s) {
    Graph g;
    auto y = g.value(st_discretize(g, gumbel_softmax_sample(g, g.constant(Tensor::vector(logits)), 1.0, rng)));
    for (std::size_t k = 0; k < y.size(); ++k) counts[k] += y[k];
  }
  for (auto& c : counts) c /= samples;
  return counts;
}

}  // namespace

TEST(Gumbel, MaxFrequenciesMatchSoftmax) {
  Rng rng(99);
  auto f = argmax_frequencies({std::log(2.0), 0.0}, 100000, rng);
  EXPECT_NEAR(f[0], 2.0 / 3.0, 0.01);
}

TEST(Gumbel, ThreeClassFrequencies) {
  Rng rng(5);
  const std::vector<double> p{0.5, 0.3, 0.2};
  auto f = argmax_frequencies({std::log(0.5) + 1.7, std::log(0.3) + 1.7, std::log(0.2) + 1.7}, 100000, rng);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(f[k], p[k], 0.01);
}

TEST(StraightThrough, OneHotForward) {
  Graph g;
  EXPECT_EQ(g.value(st_discretize(g, g.constant(Tensor::vector({0.7, 0.3})))), Tensor::vector({1.0, 0.0}));
  EXPECT_EQ(g.value(st_discretize(g, g.constant(Tensor::vector({0.5, 0.5})))), Tensor::vector({1.0, 0.0}));
}

TEST(StraightThrough, ArgmaxPreservedOnSamples) {
  Rng rng(12);
  for (int s = 0; s < 200; ++s) {
    Graph g;
    auto y = gumbel_softmax_sample(g, g.constant(Tensor::matrix(3, 2, {0.2, -0.4, 1.0, 1.5, 0.0, 0.0})), 0.5, rng);
    auto st = g.value(st_discretize(g, y));
    const auto& yv = g.value(y);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(st.at(i, 0) + st.at(i, 1), 1.0);
      EXPECT_EQ(st.at(i, 1) == 1.0, yv.at(i, 1) > yv.at(i, 0));
    }
  }
}

TEST(StraightThrough, PassThroughGradient) {
  const Tensor c = Tensor::vector({2.0, -1.0});
  ParamStore a, b;
  a.add("z", Tensor::vector({0.3, -0.2}));
  b.add("z", Tensor::vector({0.3, -0.2}));
  {
    Graph g;
    g.backward(g.dot(g.constant(c), st_discretize(g, g.softmax(g.param(a.get("z"))))));
  }
  {
    Graph g;
    g.backward(g.dot(g.constant(c), g.softmax(g.param(b.get("z")))));
  }
  EXPECT_EQ(a.get("z").grad, b.get("z").grad);
  EXPECT_NE(a.get("z").grad[0], 0.0);
}

TEST(PredictClues, EvalDeterministicTrainSeeded) {
  ModelConfig cfg = tiny_config();
  Rng init(6);
  ParamStore ps;
  add_clue_params(ps, cfg, init);
  auto adj = build_adjacency(tree({0, 0, 1, 1, 3, 3, 5}));
  auto x = random_tensor({7, static_cast<std::size_t>(cfg.clue_input_width())}, init, -1, 1);
  auto run = [&](Mode mode, std::uint64_t seed) {
    Graph g;
    Rng rng(seed);
    return predict_clues(g, ps, cfg, g.constant(x), adj, mode, rng).is_clue;
  };
  EXPECT_EQ(run(Mode::Eval, 1), run(Mode::Eval, 2));
  EXPECT_EQ(run(Mode::Train, 5), run(Mode::Train, 5));
  EXPECT_EQ(run(Mode::Eval, 1).size(), 7u);
}
