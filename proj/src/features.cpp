#include "cgc/features.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "cgc/errors.hpp"

namespace cgc {

void TagInventory::add(const std::string& tag) {
  if (ids_.count(tag)) return;
  ids_.emplace(tag, tags_.size());
  tags_.push_back(tag);
}

std::size_t TagInventory::id(const std::string& tag) const {
  auto it = ids_.find(tag);
  return it == ids_.end() ? 0 : it->second;
}

TagInventory TagInventory::from_json(const nlohmann::json& j) {
  TagInventory inv;
  auto tags = j.get<std::vector<std::string>>();
  for (std::size_t i = 1; i < tags.size(); ++i) inv.add(tags[i]);
  return inv;
}

FeatureVocab FeatureVocab::build(std::span<const AnnotatedExample> corpus) {
  FeatureVocab fv;
  for (const auto& ex : corpus)
    for (const auto& t : ex.passage) {
      fv.pos.add(t.pos);
      fv.ner.add(t.ner);
      fv.dep.add(t.dep);
    }
  return fv;
}

nlohmann::json FeatureVocab::to_json() const {
  return {{"pos", pos.to_json()}, {"ner", ner.to_json()}, {"dep", dep.to_json()}};
}

FeatureVocab FeatureVocab::from_json(const nlohmann::json& j) {
  FeatureVocab fv;
  fv.pos = TagInventory::from_json(j.at("pos"));
  fv.ner = TagInventory::from_json(j.at("ner"));
  fv.dep = TagInventory::from_json(j.at("dep"));
  return fv;
}

std::size_t word_row(std::string_view word, const Vocabulary& vocab, const ModelConfig& cfg) {
  const auto rank = vocab.rank(word);
  if (cfg.mask_low_freq && tier_of_rank(rank, cfg.r_h, cfg.r_l) == FrequencyTier::L)
    return Vocabulary::kLow;
  return rank ? Vocabulary::kNumSpecials + *rank - 1 : Vocabulary::kUnk;
}

TokenFeatures encode_tokens(const AnnotatedExample& ex, const Vocabulary& vocab,
                            const FeatureVocab& fv, const ModelConfig& cfg) {
  TokenFeatures tf;
  const std::size_t n = ex.passage.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = ex.passage[i];
    tf.word.push_back(word_row(t.text, vocab, cfg));
    tf.ner.push_back(fv.ner.id(t.ner));
    tf.pos.push_back(fv.pos.id(t.pos));
    tf.dep.push_back(fv.dep.id(t.dep));
    tf.is_lower.push_back(t.is_lower ? 1 : 0);
    tf.is_digit.push_back(t.is_digit ? 1 : 0);
    tf.like_num.push_back(t.like_num ? 1 : 0);
    tf.bio.push_back(i == ex.answer.start ? 0 : ex.answer.contains(i) ? 1 : 2);
    tf.tier.push_back(static_cast<std::size_t>(tier_of_rank(vocab.rank(t.text), cfg.r_h, cfg.r_l)));
  }
  return tf;
}

Tensor init_word_table(const Vocabulary& vocab, std::size_t dim, double range, Rng& rng,
                       const std::string& vectors_path) {
  Tensor table({vocab.table_size(), dim});
  for (auto& v : table.raw()) v = uniform(rng, -range, range);
  if (vectors_path.empty()) return table;

  std::ifstream in(vectors_path);
  if (!in) throw ConfigError("cannot open word vectors file " + vectors_path);
  std::vector<bool> seen(vocab.table_size(), false);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    std::vector<double> vals;
    double x;
    while (ls >> x) vals.push_back(x);
    if (vals.size() != dim)
      throw ConfigError("word vectors file " + vectors_path + " line " + std::to_string(lineno) +
                        ": dimension " + std::to_string(vals.size()) + ", configured " +
                        std::to_string(dim));
    const auto rank = vocab.rank(word);
    if (!rank) continue;
    const std::size_t row = Vocabulary::kNumSpecials + *rank - 1;
    if (seen[row]) continue;
    seen[row] = true;
    for (std::size_t j = 0; j < dim; ++j) table.at(row, j) = vals[j];
  }
  return table;
}

void add_embedding_params(ParamStore& store, const ModelConfig& cfg, const Vocabulary& vocab,
                          const FeatureVocab& fv, Rng& rng, const std::string& vectors_path) {
  const double r = cfg.embed_init_range;
  auto table = [&](const std::string& name, std::size_t rows, int dim) {
    Tensor t({rows, static_cast<std::size_t>(dim)});
    for (auto& v : t.raw()) v = uniform(rng, -r, r);
    store.add(name, std::move(t));
  };
  store.add("embed.word", init_word_table(vocab, static_cast<std::size_t>(cfg.word_dim), r, rng, vectors_path));
  table("embed.ner", fv.ner.size(), cfg.feat_dim);
  table("embed.pos", fv.pos.size(), cfg.feat_dim);
  table("embed.dep", fv.dep.size(), cfg.feat_dim);
  table("embed.is_lower", 2, cfg.feat_dim);
  table("embed.is_digit", 2, cfg.feat_dim);
  table("embed.like_num", 2, cfg.feat_dim);
  table("embed.bio", 3, cfg.feat_dim);
  table("embed.tier", 3, cfg.tier_dim);
  table("embed.clue", 2, cfg.feat_dim);
}

Var embed_passage(Graph& g, ParamStore& params, const TokenFeatures& tf,
                  std::optional<Var> clue_onehot) {
  auto slot = [&](const char* name, const std::vector<std::size_t>& ids) {
    return g.gather(g.param(params.get(name)), ids);
  };
  std::vector<Var> parts = {
      slot("embed.word", tf.word),         slot("embed.ner", tf.ner),
      slot("embed.pos", tf.pos),           slot("embed.dep", tf.dep),
      slot("embed.is_lower", tf.is_lower), slot("embed.is_digit", tf.is_digit),
      slot("embed.like_num", tf.like_num), slot("embed.bio", tf.bio),
      slot("embed.tier", tf.tier),
  };
  if (clue_onehot) parts.push_back(g.matmul(*clue_onehot, g.param(params.get("embed.clue"))));
  return g.concat(parts, 1);
}

}  // namespace cgc
