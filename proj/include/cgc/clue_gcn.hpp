#pragma once

#include <optional>
#include <vector>

#include "cgc/config.hpp"
#include "cgc/graph.hpp"
#include "cgc/types.hpp"

namespace cgc {

// Ã = A + I over the undirected dependency tree, with degrees d_i = Σ_j Ã_ij.
struct DependencyAdjacency {
  Tensor tilde;                 // [n×n], symmetric, unit diagonal
  std::vector<double> degree;   // [n]
  std::vector<std::vector<Graph::Edge>> normalized;  // row i: (j, Ã_ij / d_i) for nonzero Ã_ij

  std::size_t size() const { return degree.size(); }
};

DependencyAdjacency build_adjacency(const AnnotatedExample& ex);

// h_i = act( Σ_j Ã_ij (h_j W) / d_i + b ) for H [n×d_in], W [d_in×d_out], b [d_out].
Var gcn_layer(Graph& g, Var h, const DependencyAdjacency& adj, Var w, Var b, bool relu = true);

// Stacked gcn_layer over params clue.gcn{l}.W / clue.gcn{l}.b, l = 0..L-1.
Var encode_clue_features(Graph& g, ParamStore& params, Var x, const DependencyAdjacency& adj,
                         int layers);

// [n×2] unnormalized scores for (not-clue, clue).
Var clue_logits(Graph& g, Var h, Var w_out, Var b_out);

// Relaxed Gumbel-Softmax sample per row of a [n×k] score matrix:
// y = softmax((scores + g) / τ), g = −log(−log u). Softmax is invariant to the
// per-row log-normalizer, so raw scores stand in for log π. noise, when given,
// replaces the random draw (test hook); it must match the score shape.
Var gumbel_softmax_sample(Graph& g, Var scores, double tau, Rng& rng,
                          const Tensor* noise = nullptr);

Tensor gumbel_noise(const Shape& shape, Rng& rng);

// One-hot forward (argmax per row, ties to the lower index), pass-through backward.
inline Var st_discretize(Graph& g, Var y) { return g.straight_through(y); }

struct CluePrediction {
  Var logits;      // [n×2]
  Var indicator;   // [n×2] one-hot rows fed into the encoder's clue slot
  std::vector<bool> is_clue;
  std::vector<double> clue_prob;  // softmax(logits)[:,1]
};

// Train: straight-through Gumbel-Softmax sample. Eval: deterministic argmax.
CluePrediction predict_clues(Graph& g, ParamStore& params, const ModelConfig& cfg, Var features,
                             const DependencyAdjacency& adj, Mode mode, Rng& rng);

void add_clue_params(ParamStore& store, const ModelConfig& cfg, Rng& rng);

}  // namespace cgc
