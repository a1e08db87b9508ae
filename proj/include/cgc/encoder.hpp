#pragma once

#include <string>
#include <vector>

#include "cgc/config.hpp"
#include "cgc/graph.hpp"

namespace cgc {

// Gate weights act on the concatenation [x; h_prev].
struct GruCellParams {
  Var w_z, b_z;  // update gate
  Var w_r, b_r;  // reset gate
  Var w_h, b_h;  // candidate

  // Reads <prefix>.Wz, .bz, .Wr, .br, .Wh, .bh.
  static GruCellParams bind(Graph& g, ParamStore& params, const std::string& prefix);
};

void add_gru_params(ParamStore& store, const std::string& prefix, std::size_t input, std::size_t hidden,
                    double init_range, Rng& rng);

// z = σ(W_z[x;h]+b_z), r = σ(W_r[x;h]+b_r), ĥ = tanh(W_h[x; r⊙h]+b_h),
// h' = (1−z)⊙h + z⊙ĥ.
Var gru_cell(Graph& g, Var x, Var h_prev, const GruCellParams& p);

struct EncoderOutput {
  Var states;                   // [n × 2·hidden], row i = [→h_i; ←h_i]
  std::vector<Var> forward;     // →h_i
  std::vector<Var> backward;    // ←h_i
  Var last_backward;            // ←h_1, the backward state at the first token
};

// Bidirectional GRU from zero initial states over the rows of inputs [n × in].
EncoderOutput encode(Graph& g, Var inputs, const GruCellParams& fwd, const GruCellParams& bwd,
                     std::size_t hidden);

}  // namespace cgc
