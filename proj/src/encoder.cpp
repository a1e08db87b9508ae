#include "cgc/encoder.hpp"

#include "cgc/errors.hpp"

namespace cgc {

GruCellParams GruCellParams::bind(Graph& g, ParamStore& params, const std::string& prefix) {
  auto p = [&](const char* s) { return g.param(params.get(prefix + s)); };
  return {p(".Wz"), p(".bz"), p(".Wr"), p(".br"), p(".Wh"), p(".bh")};
}

void add_gru_params(ParamStore& store, const std::string& prefix, std::size_t input, std::size_t hidden,
                    double init_range, Rng& rng) {
  for (const char* gate : {"z", "r", "h"}) {
    Tensor w({hidden, input + hidden});
    for (auto& v : w.raw()) v = uniform(rng, -init_range, init_range);
    store.add(prefix + ".W" + gate, std::move(w));
    store.add(prefix + ".b" + gate, Tensor({hidden}));
  }
}

Var gru_cell(Graph& g, Var x, Var h_prev, const GruCellParams& p) {
  const auto& ws = g.value(p.w_z).shape();
  const std::size_t xin = g.value(x).size(), hn = g.value(h_prev).size();
  if (ws[1] != xin + hn || ws[0] != hn)
    throw DimensionError("gru_cell: weights " + shape_str(ws) + " for input " +
                         std::to_string(xin) + " and hidden " + std::to_string(hn));
  auto xh = g.concat({x, h_prev});
  auto z = g.sigmoid(g.add(g.matmul(p.w_z, xh), p.b_z));
  auto r = g.sigmoid(g.add(g.matmul(p.w_r, xh), p.b_r));
  auto cand = g.tanh(g.add(g.matmul(p.w_h, g.concat({x, g.mul(r, h_prev)})), p.b_h));
  // (1 − z)⊙h + z⊙ĥ  ==  h + z⊙(ĥ − h)
  return g.add(h_prev, g.mul(z, g.sub(cand, h_prev)));
}

EncoderOutput encode(Graph& g, Var inputs, const GruCellParams& fwd, const GruCellParams& bwd,
                     std::size_t hidden) {
  const Tensor& in = g.value(inputs);
  if (in.rank() != 2 || in.rows() == 0) throw DimensionError("encode: empty input sequence");
  const std::size_t n = in.rows();
  EncoderOutput out;
  out.forward.resize(n);
  out.backward.resize(n);
  std::vector<Var> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = g.row(inputs, i);

  Var h = g.constant(Tensor({hidden}));
  for (std::size_t i = 0; i < n; ++i) out.forward[i] = h = gru_cell(g, xs[i], h, fwd);
  h = g.constant(Tensor({hidden}));
  for (std::size_t i = n; i-- > 0;) out.backward[i] = h = gru_cell(g, xs[i], h, bwd);

  std::vector<Var> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = g.concat({out.forward[i], out.backward[i]});
  out.states = g.stack_rows(rows);
  out.last_backward = out.backward[0];
  return out;
}

}  // namespace cgc
