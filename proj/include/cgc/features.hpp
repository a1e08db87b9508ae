#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgc/config.hpp"
#include "cgc/graph.hpp"
#include "cgc/types.hpp"
#include "cgc/vocab.hpp"

namespace cgc {

// Closed tag inventory. Row 0 is the reserved <unk-tag> that unseen tags map to.
class TagInventory {
 public:
  TagInventory() : tags_{"<unk-tag>"} {}
  void add(const std::string& tag);
  std::size_t id(const std::string& tag) const;
  std::size_t size() const { return tags_.size(); }
  const std::vector<std::string>& tags() const { return tags_; }

  nlohmann::json to_json() const { return tags_; }
  static TagInventory from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> tags_;
  std::map<std::string, std::size_t> ids_;
};

struct FeatureVocab {
  TagInventory pos;
  TagInventory ner;
  TagInventory dep;

  static FeatureVocab build(std::span<const AnnotatedExample> corpus);
  nlohmann::json to_json() const;
  static FeatureVocab from_json(const nlohmann::json& j);
};

// Per-token row ids into each embedding table.
struct TokenFeatures {
  std::vector<std::size_t> word;  // already masked to <l> for tier-L tokens when masking is on
  std::vector<std::size_t> ner, pos, dep;
  std::vector<std::size_t> is_lower, is_digit, like_num;
  std::vector<std::size_t> bio;
  std::vector<std::size_t> tier;
  std::size_t size() const { return word.size(); }
};

TokenFeatures encode_tokens(const AnnotatedExample& ex, const Vocabulary& vocab,
                            const FeatureVocab& fv, const ModelConfig& cfg);

// Word-table row for a surface form: <l> for tier-L words when masking is on,
// <UNK> when out of vocabulary.
std::size_t word_row(std::string_view word, const Vocabulary& vocab, const ModelConfig& cfg);

// Creates embed.* parameters in the store.
void add_embedding_params(ParamStore& store, const ModelConfig& cfg, const Vocabulary& vocab,
                          const FeatureVocab& fv, Rng& rng, const std::string& vectors_path = "");

// Word table rows: pre-trained vectors where the file covers the word, else
// uniform(-range, range). Throws ConfigError on a dimension mismatch.
Tensor init_word_table(const Vocabulary& vocab, std::size_t dim, double range, Rng& rng,
                       const std::string& vectors_path = "");

// [n × width] concatenation
//   [word | NER | POS | DEP | is_lower | is_digit | like_num | BIO | tier | clue].
// clue_onehot is an [n × 2] (not-clue, clue) matrix; without it the clue slot is
// omitted, which is the clue predictor's input.
Var embed_passage(Graph& g, ParamStore& params, const TokenFeatures& tf,
                  std::optional<Var> clue_onehot);

}  // namespace cgc
