#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "cgc/errors.hpp"
#include "cgc/toy_data.hpp"
#include "cgc/trainer.hpp"
#include "fixtures.hpp"
#include "gradcheck.hpp"

using namespace cgc;
using namespace cgc::testing;

namespace {

// Two 5-token passages over a 12-word vocabulary.
std::vector<AnnotatedExample> tiny_corpus() {
  return {make_example("alpha beta gamma delta eps", "what is beta gamma ?", {3, 4}, {1, 1, 1, 2, 2}, "t0"),
          make_example("zeta beta eta theta alpha", "who theta ?", {0, 0}, {2, 2, 2, 2, 3}, "t1")};
}

struct TinyModel {
  ModelConfig cfg = tiny_config();
  PreparedData data;
  QgModel model;

  explicit TinyModel(std::vector<AnnotatedExample> corpus = tiny_corpus(), ModelConfig c = tiny_config())
      : cfg(c), data(prepare_training_data(corpus, c)), model(QgModel::initialize(c, data.vocabs)) {}
};

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

TEST(Losses, UniformClueProbabilitiesGiveLn2) {
  TinyModel m;
  m.model.params().get("clue.out.W").value.fill(0.0);
  m.model.params().get("clue.out.b").value.fill(0.0);
  Rng a(1), b(2);
  Graph g;
  auto l = compute_losses(g, m.model, m.data.examples[0], Mode::Eval, a, b).values(g);
  EXPECT_NEAR(l.clue, std::log(2.0), 1e-14);
}

// Re-derive every loss term from the model's own per-step outputs.
TEST(Losses, MatchScalarRecomputation) {
  TinyModel m;
  for (const auto& ex : m.data.examples) {
    Rng a(1), b(2);
    Graph g;
    auto got = compute_losses(g, m.model, ex, Mode::Eval, a, b).values(g);

    Graph h;
    auto enc = m.model.encode_passage(h, ex.base, Mode::Eval, a, b);
    auto steps = teacher_forced_unroll(h, m.model.params(), m.cfg, enc.s0, enc.memory, m.model.decoder_inputs(ex.base),
                                       Mode::Eval, a);
    const auto& logits = h.value(enc.clues.logits);
    double clue = 0.0;
    for (std::size_t i = 0; i < ex.base.passage.size(); ++i) {
      const double p1 = sigmoid(logits.at(i, 1) - logits.at(i, 0));
      clue -= std::log(ex.passage_clue_label[i] ? p1 : 1.0 - p1);
    }
    clue /= static_cast<double>(ex.base.passage.size());
    ASSERT_EQ(steps.size(), ex.base.question.size() + 1);
    double gen = 0.0, gate = 0.0;
    for (std::size_t t = 0; t < steps.size(); ++t) {
      auto d = ExtendedDistribution::from_step(h, steps[t]);
      const bool copied = t < ex.question_copy_label.size() && ex.question_copy_label[t];
      if (copied) {
        double mass = 0.0;
        for (auto i : ex.copy_alignment[t]) mass += d.copy[i];
        gen -= std::log(d.gate * mass);
        gate -= std::log(d.gate);
      } else {
        gen -= std::log((1.0 - d.gate) * d.gen[ex.question_target_id[t]]);
        gate -= std::log(1.0 - d.gate);
      }
    }
    gen /= static_cast<double>(steps.size());
    gate /= static_cast<double>(steps.size());
    EXPECT_NEAR(got.clue, clue, 1e-12);
    EXPECT_NEAR(got.gen, gen, 1e-12);
    EXPECT_NEAR(got.gate, gate, 1e-12);
    EXPECT_NEAR(got.total, clue + gen + gate, 1e-12);
  }
}

TEST(Losses, WeightsScaleTotal) {
  TinyModel m;
  m.model.config().lambda_gen = 2.0;
  m.model.config().lambda_gate = 0.5;
  Rng a(1), b(2);
  Graph g;
  auto l = compute_losses(g, m.model, m.data.examples[1], Mode::Eval, a, b).values(g);
  EXPECT_NEAR(l.total, l.clue + 2.0 * l.gen + 0.5 * l.gate, 1e-12);
}

// Tiny model (vocab 12, hidden 8, GCN width 8, 5-token passages): every
// parameter's gradient of the total loss against central differences.
TEST(Losses, EndToEndGradientCheck) {
  TinyModel m;
  ASSERT_EQ(m.data.vocabs.words.size(), 12u);
  ASSERT_EQ(m.cfg.enc_hidden, 8);
  ASSERT_EQ(m.cfg.gcn_hidden, 8);
  // A random point with sizable weights: at the ±0.08 init the attention
  // gradients are ~1e-8, below finite-difference resolution.
  Rng rng(4);
  for (auto& [name, p] : m.model.params())
    for (auto& v : p.value.raw()) v = uniform(rng, -0.5, 0.5);
  for (const auto& ex : m.data.examples) {
    auto res = grad_check(m.model.params(), [&](Graph& g) {
      Rng a(1), b(2);
      return compute_losses(g, m.model, ex, Mode::Eval, a, b).total;
    });
    EXPECT_LT(res.worst_rel_error, 1e-3) << ex.base.id << " worst " << res.worst_param;
  }
}

// ------------------------------------------------------------------ Adam / EMA

TEST(Adam, ZeroGradientLeavesParams) {
  ParamStore ps;
  ps.add("w", Tensor::vector({1.0, -2.0}));
  AdamOptimizer adam(ps, 0.001, 0.8, 0.999, 1e-8, 5.0);
  ps.zero_grad();
  adam.step(ps);
  EXPECT_EQ(ps.get("w").value, Tensor::vector({1.0, -2.0}));
  EXPECT_EQ(adam.steps(), 1);
}

TEST(Adam, FirstStepMovesByLr) {
  ParamStore ps;
  ps.add("w", Tensor::scalar(0.5));
  AdamOptimizer adam(ps, 0.001, 0.8, 0.999, 1e-8, 5.0);
  ps.get("w").grad.fill(1.0);
  adam.step(ps);
  // m̂ = 1, v̂ = 1  ->  Δ = lr / (1 + eps)
  EXPECT_NEAR(ps.get("w").value.item(), 0.5 - 0.001 / (1.0 + 1e-8), 1e-15);
}

TEST(Adam, ClipsElementwise) {
  ParamStore a, b;
  a.add("w", Tensor::vector({0.0, 0.0}));
  b.add("w", Tensor::vector({0.0, 0.0}));
  AdamOptimizer oa(a, 0.01, 0.8, 0.999, 1e-8, 5.0), ob(b, 0.01, 0.8, 0.999, 1e-8, 5.0);
  for (int s = 0; s < 3; ++s) {
    a.get("w").grad = Tensor::vector({100.0, -0.5 * s});
    b.get("w").grad = Tensor::vector({5.0, -0.5 * s});
    oa.step(a);
    ob.step(b);
  }
  EXPECT_EQ(a.get("w").value, b.get("w").value);
}

TEST(Ema, ConvergesToFrozenParams) {
  ParamStore ps;
  ps.add("w", Tensor::vector({0.0, 4.0}));
  Ema ema(ps, 0.9);
  ps.get("w").value = Tensor::vector({1.0, -1.0});
  ema.update(ps);
  EXPECT_NEAR(ema.shadow().get("w").value[0], 0.1, 1e-15);
  for (int i = 0; i < 400; ++i) ema.update(ps);
  EXPECT_NEAR(ema.shadow().get("w").value[0], 1.0, 1e-12);
  EXPECT_NEAR(ema.shadow().get("w").value[1], -1.0, 1e-12);
}

// ------------------------------------------------------------------ loop

namespace {

ModelConfig loop_config() {
  auto c = tiny_config();
  c.r_h = 3;
  c.r_l = 30;
  c.target_vocab = 50;
  c.batch = 4;
  c.lr = 0.01;
  c.dropout = 0.1;
  c.ema = 0.9;
  return c;
}

std::vector<double> totals(const TrainResult& r) {
  std::vector<double> out;
  for (const auto& e : r.log) out.push_back(e.train.total);
  return out;
}

}  // namespace

TEST(Train, ZeroEpochsKeepsInitialization) {
  auto cfg = loop_config();
  cfg.epochs = 0;
  TinyModel m(make_toy_data(4, 1), cfg);
  const auto init = m.model.params();
  auto res = train(m.model, m.data.examples);
  EXPECT_TRUE(res.log.empty());
  EXPECT_EQ(m.model.train_steps(), 0);
  for (const auto& [name, p] : init) {
    EXPECT_EQ(res.raw.get(name).value, p.value) << name;
    EXPECT_EQ(res.ema.get(name).value, p.value) << name;
  }
}

TEST(Train, SeededRunsAreIdentical) {
  auto cfg = loop_config();
  cfg.epochs = 3;
  TinyModel a(make_toy_data(8, 2), cfg), b(make_toy_data(8, 2), cfg);
  auto ra = train(a.model, a.data.examples);
  auto rb = train(b.model, b.data.examples);
  EXPECT_EQ(totals(ra), totals(rb));
  EXPECT_EQ(ra.raw.to_json(), rb.raw.to_json());
  EXPECT_EQ(a.model.train_steps(), 6);
}

TEST(Train, LossFallsOnToyCorpus) {
  auto cfg = loop_config();
  cfg.epochs = 50;
  TinyModel m(make_toy_data(8, 3), cfg);
  auto res = train(m.model, m.data.examples);
  ASSERT_EQ(res.log.size(), 50u);
  EXPECT_LT(res.log[49].train.total, res.log[0].train.total);
}

TEST(Train, DevSelectionAndLogFormat) {
  auto cfg = loop_config();
  cfg.epochs = 4;
  TinyModel m(make_toy_data(8, 4), cfg);
  auto dev = label_with(make_toy_data(3, 40), m.data.vocabs, cfg);
  std::vector<nlohmann::json> lines;
  TrainOptions opts;
  opts.dev = dev;
  opts.on_epoch = [&](const EpochLog& e) { lines.push_back(e.to_json()); };
  auto res = train(m.model, m.data.examples, opts);
  ASSERT_EQ(lines.size(), 4u);
  for (const char* k : {"epoch", "loss_clue", "loss_gen", "loss_gate", "total", "dev"})
    EXPECT_TRUE(lines[0].contains(k)) << k;
  double best = 1e300;
  int best_epoch = 0;
  for (const auto& e : res.log)
    if (e.dev->total < best) {
      best = e.dev->total;
      best_epoch = e.epoch;
    }
  EXPECT_EQ(res.best_epoch, best_epoch);
}

TEST(Train, NonFiniteLossReportsBatch) {
  auto cfg = loop_config();
  TinyModel m(make_toy_data(4, 5), cfg);
  m.model.params().get("dec.out.W").value.fill(std::numeric_limits<double>::quiet_NaN());
  try {
    train(m.model, m.data.examples);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("batch 0"), std::string::npos) << e.what();
  }
}
