#include "cgc/model.hpp"

#include "cgc/errors.hpp"

namespace cgc {

PreparedData prepare_training_data(std::span<const AnnotatedExample> corpus, const ModelConfig& cfg) {
  cfg.validate();
  PreparedData out;
  out.vocabs.words = Vocabulary::build(corpus, static_cast<std::size_t>(cfg.vocab_max));
  out.examples = label_corpus(corpus, out.vocabs.words, cfg.r_h);
  out.vocabs.targets = build_reduced_target_vocab(out.examples, static_cast<std::size_t>(cfg.target_vocab));
  for (auto& ex : out.examples) assign_targets(ex, out.vocabs.targets);
  out.vocabs.features = FeatureVocab::build(corpus);
  return out;
}

std::vector<LabeledExample> label_with(std::span<const AnnotatedExample> corpus, const ModelVocabs& vocabs,
                                       const ModelConfig& cfg) {
  auto out = label_corpus(corpus, vocabs.words, cfg.r_h);
  for (auto& ex : out) assign_targets(ex, vocabs.targets);
  return out;
}

QgModel::QgModel(ModelConfig cfg, ModelVocabs vocabs, ParamStore params)
    : cfg_(std::move(cfg)), vocabs_(std::move(vocabs)), params_(std::move(params)) {
  cfg_.validate();
}

QgModel QgModel::initialize(const ModelConfig& cfg, ModelVocabs vocabs, const std::string& vectors_path) {
  cfg.validate();
  Rng rng = substream(cfg.seed, "init");
  ParamStore ps;
  add_embedding_params(ps, cfg, vocabs.words, vocabs.features, rng, vectors_path);
  add_clue_params(ps, cfg, rng);
  const auto in = static_cast<std::size_t>(cfg.encoder_input_width());
  const auto hid = static_cast<std::size_t>(cfg.enc_hidden);
  add_gru_params(ps, "enc.fwd", in, hid, cfg.init_range, rng);
  add_gru_params(ps, "enc.bwd", in, hid, cfg.init_range, rng);
  add_decoder_params(ps, cfg, vocabs.targets.size(), rng);
  return QgModel(cfg, std::move(vocabs), std::move(ps));
}

EncodedPassage QgModel::encode_passage(Graph& g, const AnnotatedExample& ex, Mode mode, Rng& dropout_rng,
                                       Rng& gumbel_rng, const std::vector<bool>* gold_clues) {
  EncodedPassage e;
  e.features = encode_tokens(ex, vocabs_.words, vocabs_.features, cfg_);
  e.adjacency = build_adjacency(ex);
  auto clue_in = embed_passage(g, params_, e.features, std::nullopt);
  e.clues = predict_clues(g, params_, cfg_, clue_in, e.adjacency, mode, gumbel_rng);

  Var indicator = e.clues.indicator;
  if (gold_clues) {
    if (gold_clues->size() != ex.passage.size()) throw DimensionError("gold clue labels do not match passage length");
    Tensor onehot({ex.passage.size(), 2});
    for (std::size_t i = 0; i < gold_clues->size(); ++i) onehot.at(i, (*gold_clues)[i] ? 1 : 0) = 1.0;
    indicator = g.constant(std::move(onehot));
  }
  auto enc_in = g.dropout(embed_passage(g, params_, e.features, indicator), cfg_.dropout, mode, dropout_rng);
  const auto hid = static_cast<std::size_t>(cfg_.enc_hidden);
  e.encoder = encode(g, enc_in, GruCellParams::bind(g, params_, "enc.fwd"),
                     GruCellParams::bind(g, params_, "enc.bwd"), hid);
  auto states = g.dropout(e.encoder.states, cfg_.dropout, mode, dropout_rng);
  e.memory = prepare_attention(g, states, g.param(params_.get("dec.attn.Wh")));
  e.s0 = init_decoder(g, e.encoder.last_backward, g.param(params_.get("dec.init.W")),
                      g.param(params_.get("dec.init.b")));
  return e;
}

std::vector<std::size_t> QgModel::decoder_inputs(const AnnotatedExample& ex) const {
  std::vector<std::size_t> rows{Vocabulary::kSos};
  for (const auto& q : ex.question) rows.push_back(word_row(q, vocabs_.words, cfg_));
  return rows;
}

}  // namespace cgc
