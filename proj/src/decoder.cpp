#include "cgc/decoder.hpp"

#include "cgc/errors.hpp"

namespace cgc {

void add_decoder_params(ParamStore& store, const ModelConfig& cfg, std::size_t target_vocab, Rng& rng) {
  const double r = cfg.init_range;
  auto weight = [&](Shape shape) {
    Tensor t(std::move(shape));
    for (auto& v : t.raw()) v = uniform(rng, -r, r);
    return t;
  };
  const auto enc = static_cast<std::size_t>(cfg.enc_hidden);
  const auto dec = static_cast<std::size_t>(cfg.dec_hidden);
  const auto att = static_cast<std::size_t>(cfg.attn_dim);
  const auto word = static_cast<std::size_t>(cfg.word_dim);
  const auto d = static_cast<std::size_t>(cfg.readout_dim);

  store.add("dec.init.W", weight({dec, enc}));
  store.add("dec.init.b", Tensor({dec}));
  add_gru_params(store, "dec.gru", word + 2 * enc, dec, r, rng);
  store.add("dec.attn.Ws", weight({att, dec}));
  store.add("dec.attn.Wh", weight({2 * enc, att}));
  store.add("dec.attn.v", weight({att}));
  store.add("dec.read.Ww", weight({2 * d, word}));
  store.add("dec.read.Wc", weight({2 * d, 2 * enc}));
  store.add("dec.read.Ws", weight({2 * d, dec}));
  store.add("dec.out.W", weight({target_vocab, d}));
  store.add("dec.copy.ws", weight({dec}));
  store.add("dec.copy.wc", weight({2 * enc}));
  store.add("dec.copy.b", Tensor({1}));
}

Var init_decoder(Graph& g, Var last_backward, Var w0, Var b) {
  return g.tanh(g.add(g.matmul(w0, last_backward), b));
}

AttentionMemory prepare_attention(Graph& g, Var states, Var w_h) {
  AttentionMemory m;
  m.states = states;
  m.states_t = g.transpose(states);
  m.keys = g.matmul(states, w_h);
  m.length = g.value(states).rows();
  return m;
}

AttentionResult attention(Graph& g, Var s, const AttentionMemory& mem, Var w_s, Var v) {
  AttentionResult a;
  auto pre = g.tanh(g.add_row_bias(mem.keys, g.matmul(w_s, s)));
  a.scores = g.matmul(pre, v);
  a.weights = g.softmax(a.scores);
  a.context = g.matmul(mem.states_t, a.weights);
  return a;
}

StepOutput decode_step(Graph& g, ParamStore& params, const ModelConfig& cfg, Var w_prev, Var c_prev,
                       Var s_prev, const AttentionMemory& mem, Mode mode, Rng& rng) {
  auto p = [&](const char* name) { return g.param(params.get(name)); };
  StepOutput out;
  out.state = gru_cell(g, g.concat({w_prev, c_prev}), s_prev, GruCellParams::bind(g, params, "dec.gru"));
  auto att = attention(g, out.state, mem, p("dec.attn.Ws"), p("dec.attn.v"));
  out.context = att.context;
  out.weights = att.weights;
  out.readout = g.add(g.add(g.matmul(p("dec.read.Ww"), w_prev), g.matmul(p("dec.read.Wc"), out.context)),
                      g.matmul(p("dec.read.Ws"), out.state));
  out.maxout = g.maxout_pairs(out.readout);
  out.gen = g.softmax(g.matmul(p("dec.out.W"), g.dropout(out.maxout, cfg.dropout, mode, rng)));
  out.gate = g.sigmoid(g.add(g.add(g.dot(p("dec.copy.ws"), out.state), g.dot(p("dec.copy.wc"), out.context)),
                             p("dec.copy.b")));
  return out;
}

std::vector<StepOutput> teacher_forced_unroll(Graph& g, ParamStore& params, const ModelConfig& cfg,
                                              Var s0, const AttentionMemory& mem,
                                              std::span<const std::size_t> input_rows, Mode mode,
                                              Rng& rng) {
  auto table = g.param(params.get("embed.word"));
  Var s = s0;
  Var c = g.constant(Tensor({2 * static_cast<std::size_t>(cfg.enc_hidden)}));
  std::vector<StepOutput> steps;
  steps.reserve(input_rows.size());
  for (auto row : input_rows) {
    auto step = decode_step(g, params, cfg, g.gather_row(table, row), c, s, mem, mode, rng);
    s = step.state;
    c = step.context;
    steps.push_back(step);
  }
  return steps;
}

ExtendedDistribution ExtendedDistribution::from_step(const Graph& g, const StepOutput& step) {
  ExtendedDistribution d;
  d.gen = g.value(step.gen).raw();
  d.copy = g.value(step.weights).raw();
  d.gate = g.value(step.gate).item();
  return d;
}

std::map<std::string, double> ExtendedDistribution::surface(std::span<const std::string> passage_norm,
                                                            const ReducedTargetVocab& reduced) const {
  if (passage_norm.size() != copy.size())
    throw DimensionError("surface: " + std::to_string(passage_norm.size()) + " passage tokens vs " +
                         std::to_string(copy.size()) + " attention weights");
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < gen.size(); ++i) out[reduced.surface(i)] += (1.0 - gate) * gen[i];
  for (std::size_t i = 0; i < copy.size(); ++i) out[passage_norm[i]] += gate * copy[i];
  return out;
}

double ExtendedDistribution::total_mass() const {
  double sg = 0.0, sc = 0.0;
  for (double v : gen) sg += v;
  for (double v : copy) sc += v;
  return (1.0 - gate) * sg + gate * sc;
}

}  // namespace cgc
