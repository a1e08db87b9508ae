#pragma once

#include <span>
#include <string>
#include <vector>

#include "cgc/clue_gcn.hpp"
#include "cgc/config.hpp"
#include "cgc/decoder.hpp"
#include "cgc/encoder.hpp"
#include "cgc/features.hpp"
#include "cgc/labeling.hpp"
#include "cgc/param_store.hpp"
#include "cgc/vocab.hpp"

namespace cgc {

struct ModelVocabs {
  Vocabulary words;
  ReducedTargetVocab targets;
  FeatureVocab features;
};

// Vocabularies and fully labeled training examples derived from a raw corpus.
struct PreparedData {
  ModelVocabs vocabs;
  std::vector<LabeledExample> examples;
};

PreparedData prepare_training_data(std::span<const AnnotatedExample> corpus, const ModelConfig& cfg);

// Labels further examples (e.g. a dev split) against existing vocabularies.
std::vector<LabeledExample> label_with(std::span<const AnnotatedExample> corpus, const ModelVocabs& vocabs,
                                       const ModelConfig& cfg);

// Everything computed from the passage side of one example.
struct EncodedPassage {
  TokenFeatures features;
  DependencyAdjacency adjacency;
  CluePrediction clues;
  EncoderOutput encoder;
  AttentionMemory memory;
  Var s0;
};

class QgModel {
 public:
  QgModel(ModelConfig cfg, ModelVocabs vocabs, ParamStore params);

  // Fresh parameters: weights uniform(±init_range), biases zero, embeddings
  // uniform(±embed_init_range) or from the pre-trained vectors file.
  static QgModel initialize(const ModelConfig& cfg, ModelVocabs vocabs, const std::string& vectors_path = "");

  const ModelConfig& config() const { return cfg_; }
  ModelConfig& config() { return cfg_; }
  const ModelVocabs& vocabs() const { return vocabs_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }

  // Optimizer updates applied so far; 0 means freshly initialized.
  long train_steps() const { return train_steps_; }
  void set_train_steps(long n) { train_steps_ = n; }

  // Clue prediction, feature embedding, BiGRU and decoder initialization.
  // gold_clues, when given, replaces the predicted indicator in the encoder input.
  EncodedPassage encode_passage(Graph& g, const AnnotatedExample& ex, Mode mode, Rng& dropout_rng,
                                Rng& gumbel_rng, const std::vector<bool>* gold_clues = nullptr);

  // Word-table rows fed to the decoder under teacher forcing: <SOS>, q_1, …, q_m.
  std::vector<std::size_t> decoder_inputs(const AnnotatedExample& ex) const;

 private:
  ModelConfig cfg_;
  ModelVocabs vocabs_;
  ParamStore params_;
  long train_steps_ = 0;
};

}  // namespace cgc
