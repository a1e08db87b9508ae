#include "cgc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cgc/errors.hpp"

namespace cgc {

LossBreakdown LossVars::values(const Graph& g) const {
  return {g.value(clue).item(), g.value(gen).item(), g.value(gate).item(), g.value(total).item()};
}

LossVars compute_losses(Graph& g, QgModel& model, const LabeledExample& ex, Mode mode, Rng& dropout_rng,
                        Rng& gumbel_rng) {
  const auto& cfg = model.config();
  const double floor = cfg.prob_floor;
  const std::vector<bool>* gold = cfg.gold_clue_in_training && mode == Mode::Train ? &ex.passage_clue_label : nullptr;
  auto enc = model.encode_passage(g, ex.base, mode, dropout_rng, gumbel_rng, gold);
  auto nll = [&](Var p) { return g.neg(g.log(g.clamp_min(p, floor))); };

  // clue cross-entropy
  const std::size_t n = ex.base.passage.size();
  std::vector<std::size_t> gold_idx(n);
  for (std::size_t i = 0; i < n; ++i) gold_idx[i] = 2 * i + (ex.passage_clue_label[i] ? 1 : 0);
  auto clue_probs = g.softmax_rows(enc.clues.logits);
  std::vector<Var> clue_terms;
  clue_terms.reserve(n);
  for (auto idx : gold_idx) clue_terms.push_back(nll(g.pick(clue_probs, idx)));
  LossVars out;
  out.clue = g.mean(g.concat(clue_terms));

  // decoder
  auto inputs = model.decoder_inputs(ex.base);
  auto steps = teacher_forced_unroll(g, model.params(), cfg, enc.s0, enc.memory, inputs, mode, dropout_rng);
  std::vector<Var> gen_terms, gate_terms;
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const auto& st = steps[t];
    const bool copied = t < ex.question_copy_label.size() && ex.question_copy_label[t];
    auto not_gate = g.sub(g.constant(Tensor::scalar(1.0)), st.gate);
    if (copied) {
      gate_terms.push_back(nll(st.gate));
      gen_terms.push_back(nll(g.mul(st.gate, g.sum_at(st.weights, ex.copy_alignment[t]))));
    } else {
      gate_terms.push_back(nll(not_gate));
      gen_terms.push_back(nll(g.mul(not_gate, g.pick(st.gen, ex.question_target_id.at(t)))));
    }
  }
  out.gen = g.mean(g.concat(gen_terms));
  out.gate = g.mean(g.concat(gate_terms));
  out.total = g.add(g.add(g.scale(out.clue, cfg.lambda_clue), g.scale(out.gen, cfg.lambda_gen)),
                    g.scale(out.gate, cfg.lambda_gate));
  return out;
}

// ------------------------------------------------------------------ Adam

AdamOptimizer::AdamOptimizer(const ParamStore& params, double lr, double beta1, double beta2, double eps,
                             double clip)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), clip_(clip) {
  for (const auto& [name, p] : params) {
    m_.emplace(name, Tensor(p.value.shape()));
    v_.emplace(name, Tensor(p.value.shape()));
  }
}

void AdamOptimizer::step(ParamStore& params) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (auto& [name, p] : params) {
    auto& m = m_.at(name).raw();
    auto& v = v_.at(name).raw();
    auto& w = p.value.raw();
    const auto& gr = p.grad.raw();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gi = std::clamp(gr[i], -clip_, clip_);
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * gi;
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * gi * gi;
      w[i] -= lr_ * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps_);
    }
  }
}

// ------------------------------------------------------------------ EMA

Ema::Ema(const ParamStore& params, double decay) : decay_(decay) {
  for (const auto& [name, p] : params) shadow_.add(name, p.value);
}

void Ema::update(const ParamStore& params) {
  for (auto& [name, s] : shadow_) {
    auto& sv = s.value.raw();
    const auto& pv = params.get(name).value.raw();
    for (std::size_t i = 0; i < sv.size(); ++i) sv[i] = decay_ * sv[i] + (1.0 - decay_) * pv[i];
  }
}

// ------------------------------------------------------------------ loop

nlohmann::json EpochLog::to_json() const {
  auto lb = [](const LossBreakdown& l) {
    return nlohmann::json{{"loss_clue", l.clue}, {"loss_gen", l.gen}, {"loss_gate", l.gate}, {"total", l.total}};
  };
  auto j = lb(train);
  j["epoch"] = epoch;
  if (dev) j["dev"] = lb(*dev);
  return j;
}

namespace {

void accumulate(LossBreakdown& acc, const LossBreakdown& x) {
  acc.clue += x.clue;
  acc.gen += x.gen;
  acc.gate += x.gate;
  acc.total += x.total;
}

LossBreakdown divided(LossBreakdown l, double n) {
  l.clue /= n;
  l.gen /= n;
  l.gate /= n;
  l.total /= n;
  return l;
}

std::string describe(const LossBreakdown& l) {
  return "clue=" + std::to_string(l.clue) + " gen=" + std::to_string(l.gen) + " gate=" + std::to_string(l.gate) +
         " total=" + std::to_string(l.total);
}

}  // namespace

LossBreakdown evaluate_loss(QgModel& model, std::span<const LabeledExample> data) {
  LossBreakdown acc;
  Rng unused(0);
  for (const auto& ex : data) {
    Graph g;
    accumulate(acc, compute_losses(g, model, ex, Mode::Eval, unused, unused).values(g));
  }
  return data.empty() ? acc : divided(acc, static_cast<double>(data.size()));
}

TrainResult train(QgModel& model, std::span<const LabeledExample> data, const TrainOptions& opts) {
  const auto& cfg = model.config();
  cfg.validate();
  auto& params = model.params();
  Rng shuffle_rng = substream(cfg.seed, "shuffle");
  Rng dropout_rng = substream(cfg.seed, "dropout");
  Rng gumbel_rng = substream(cfg.seed, "gumbel");
  AdamOptimizer adam(params, cfg.lr, cfg.beta1, cfg.beta2, cfg.eps, cfg.clip);
  Ema ema(params, cfg.ema);

  TrainResult result;
  result.best_dev = ema.shadow();
  double best_dev = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  const auto batch = static_cast<std::size_t>(cfg.batch);
  std::size_t batch_id = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    LossBreakdown epoch_acc;
    for (std::size_t start = 0; start < order.size(); start += batch, ++batch_id) {
      const std::size_t end = std::min(order.size(), start + batch);
      const double scale = 1.0 / static_cast<double>(end - start);
      params.zero_grad();
      LossBreakdown batch_acc;
      try {
        for (std::size_t k = start; k < end; ++k) {
          Graph g;
          auto losses = compute_losses(g, model, data[order[k]], Mode::Train, dropout_rng, gumbel_rng);
          auto vals = losses.values(g);
          accumulate(batch_acc, vals);
          if (!std::isfinite(vals.total))
            throw NumericError("non-finite loss on example " + data[order[k]].base.id);
          g.backward(g.scale(losses.total, scale));
        }
      } catch (const NumericError& e) {
        throw NumericError("training aborted at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch_id) + " (" + describe(batch_acc) + "): " + e.what());
      }
      accumulate(epoch_acc, batch_acc);
      adam.step(params);
      ema.update(params);
      model.set_train_steps(model.train_steps() + 1);
    }
    EpochLog log;
    log.epoch = epoch;
    log.train = divided(epoch_acc, static_cast<double>(std::max<std::size_t>(data.size(), 1)));
    if (!opts.dev.empty()) {
      // Dev loss is measured with the EMA weights, which is what inference uses.
      ParamStore raw = params;
      params.assign_values(ema.shadow());
      log.dev = evaluate_loss(model, opts.dev);
      params.assign_values(raw);
      if (log.dev->total < best_dev) {
        best_dev = log.dev->total;
        result.best_dev = ema.shadow();
        result.best_epoch = epoch;
      }
    }
    if (opts.on_epoch) opts.on_epoch(log);
    result.log.push_back(log);
  }
  result.raw = params;
  result.ema = ema.shadow();
  if (opts.dev.empty()) {
    result.best_dev = ema.shadow();
    result.best_epoch = cfg.epochs;
  }
  return result;
}

}  // namespace cgc
