#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "cgc/config.hpp"
#include "cgc/encoder.hpp"
#include "cgc/graph.hpp"
#include "cgc/vocab.hpp"

namespace cgc {

void add_decoder_params(ParamStore& store, const ModelConfig& cfg, std::size_t target_vocab, Rng& rng);

// s_0 = tanh(W_0 ←h_1 + b)
Var init_decoder(Graph& g, Var last_backward, Var w0, Var b);

// Per-example attention inputs computed once: H, Hᵀ and the keys H·W_h.
struct AttentionMemory {
  Var states;
  Var states_t;
  Var keys;
  std::size_t length = 0;
};

AttentionMemory prepare_attention(Graph& g, Var states, Var w_h);

struct AttentionResult {
  Var scores;   // e_t  [n]
  Var weights;  // α_t  [n]
  Var context;  // c_t  [2·enc_hidden]
};

// e_{t,i} = vᵀ tanh(W_s s_t + W_h h_i), α_t = softmax(e_t), c_t = Σ_i α_{t,i} h_i.
AttentionResult attention(Graph& g, Var s, const AttentionMemory& mem, Var w_s, Var v);

struct StepOutput {
  Var state;    // s_t
  Var context;  // c_t
  Var weights;  // α_t
  Var readout;  // r_t, 2d
  Var maxout;   // m_t, d
  Var gen;      // softmax(W_o m_t) over the reduced vocabulary
  Var gate;     // g_c, scalar
};

// One decoder step:
//   s_t = GRU([w_{t−1}; c_{t−1}], s_{t−1}); attention; r_t = W_rw w + W_rc c_t + W_rs s_t;
//   m_t = pairwise max of r_t (dropout in train mode); gen = softmax(W_o m_t);
//   g_c = σ(W_cs·s_t + W_cc·c_t + b).
StepOutput decode_step(Graph& g, ParamStore& params, const ModelConfig& cfg, Var w_prev, Var c_prev,
                       Var s_prev, const AttentionMemory& mem, Mode mode, Rng& rng);

// Teacher-forced unroll: input_rows are word-table rows of <SOS>, q_1, …, q_m;
// produces m+1 steps (the last predicts <EOS>). c_0 is the zero vector.
std::vector<StepOutput> teacher_forced_unroll(Graph& g, ParamStore& params, const ModelConfig& cfg,
                                              Var s0, const AttentionMemory& mem,
                                              std::span<const std::size_t> input_rows, Mode mode,
                                              Rng& rng);

// Numeric snapshot of one step's output, consumed by beam search.
struct ExtendedDistribution {
  std::vector<double> gen;   // over the reduced vocabulary
  std::vector<double> copy;  // attention over source positions
  double gate = 0.0;         // g_c

  static ExtendedDistribution from_step(const Graph& g, const StepOutput& step);

  // P(w) = (1−g_c)·gen(w) + g_c·Σ_{i: passage_i = w} α_i over normalized surface
  // forms. Reduced-vocab specials appear under "<UNK>", "<EOS>", "<SOS>".
  std::map<std::string, double> surface(std::span<const std::string> passage_norm,
                                        const ReducedTargetVocab& reduced) const;
  // (1−g_c)·Σgen + g_c·Σcopy
  double total_mass() const;
};

}  // namespace cgc
