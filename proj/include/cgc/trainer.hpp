#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgc/model.hpp"

namespace cgc {

struct LossBreakdown {
  double clue = 0.0;
  double gen = 0.0;
  double gate = 0.0;
  double total = 0.0;
};

struct LossVars {
  Var clue, gen, gate, total;
  LossBreakdown values(const Graph& g) const;
};

// Per-example losses, each averaged over its positions:
//   clue: −log p(gold clue label) per passage token;
//   gate: binary cross-entropy of g_c against the copy label per decoder step
//         (the <EOS> step counts as generated);
//   gen:  −log of the gold outcome per step, g_c·Σ_{i∈alignment} α_i for copied
//         tokens and (1−g_c)·gen(target) otherwise.
// Probabilities are floored at cfg.prob_floor before the log.
LossVars compute_losses(Graph& g, QgModel& model, const LabeledExample& ex, Mode mode, Rng& dropout_rng,
                        Rng& gumbel_rng);

// Elementwise clip to [−clip, clip], then bias-corrected Adam.
class AdamOptimizer {
 public:
  AdamOptimizer(const ParamStore& params, double lr, double beta1, double beta2, double eps, double clip);
  void step(ParamStore& params);
  long steps() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_, clip_;
  long t_ = 0;
  std::map<std::string, Tensor> m_, v_;
};

// shadow ← decay·shadow + (1−decay)·param after each update.
class Ema {
 public:
  Ema(const ParamStore& params, double decay);
  void update(const ParamStore& params);
  const ParamStore& shadow() const { return shadow_; }

 private:
  double decay_;
  ParamStore shadow_;
};

struct EpochLog {
  int epoch = 0;
  LossBreakdown train;
  std::optional<LossBreakdown> dev;
  nlohmann::json to_json() const;
};

struct TrainResult {
  std::vector<EpochLog> log;
  ParamStore raw;        // final raw parameters
  ParamStore ema;        // final EMA shadow
  ParamStore best_dev;   // EMA shadow at the lowest dev loss (== ema without dev data)
  int best_epoch = 0;
};

struct TrainOptions {
  std::span<const LabeledExample> dev;
  std::function<void(const EpochLog&)> on_epoch;  // e.g. stream the JSON log
};

// Seeded shuffling, per-batch forward/backward, clip + Adam, EMA. The model's
// params are left at the raw trained values. Throws NumericError with the
// batch id and loss breakdown when a loss becomes non-finite.
TrainResult train(QgModel& model, std::span<const LabeledExample> data, const TrainOptions& opts = {});

// Mean eval-mode losses (no dropout, argmax clues).
LossBreakdown evaluate_loss(QgModel& model, std::span<const LabeledExample> data);

}  // namespace cgc
