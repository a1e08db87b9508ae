#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgc/types.hpp"

namespace cgc {

// Word vocabulary ranked by training-corpus frequency (rank 1 = most frequent).
// Embedding-table ids put the five special tokens first, then words in rank
// order: id(word of rank r) = kNumSpecials + r - 1.
class Vocabulary {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnk = 1;
  static constexpr std::size_t kEos = 2;
  static constexpr std::size_t kSos = 3;
  static constexpr std::size_t kLow = 4;  // <l>, the shared low-frequency row
  static constexpr std::size_t kNumSpecials = 5;

  // Counts normalized passage and question tokens; ties keep first-occurrence order.
  static Vocabulary build(std::span<const AnnotatedExample> corpus, std::size_t max_size = 20000);
  static Vocabulary from_words(std::vector<std::string> ranked_words);

  std::size_t size() const { return words_.size(); }  // V, excluding specials
  std::size_t table_size() const { return words_.size() + kNumSpecials; }

  std::optional<std::size_t> rank(std::string_view word) const;
  // Embedding id for a surface form, <UNK> when out of vocabulary.
  std::size_t id(std::string_view word) const;
  const std::string& word_at_rank(std::size_t rank) const { return words_.at(rank - 1); }
  const std::vector<std::string>& words() const { return words_; }

  nlohmann::json to_json() const { return words_; }
  static Vocabulary from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> rank_;
};

enum class FrequencyTier { H, M, L };

const char* tier_name(FrequencyTier t);
FrequencyTier tier_of_rank(std::optional<std::size_t> rank, int r_h, int r_l);
// Total over all strings; out-of-vocabulary words are L. Throws ConfigError
// unless 0 < r_h < r_l.
FrequencyTier tier_of(std::string_view word, const Vocabulary& vocab, int r_h = 100, int r_l = 2000);

// Decoder generation vocabulary: the top-N generated question words plus
// <UNK>, <EOS>, <SOS> at ids 0, 1, 2.
class ReducedTargetVocab {
 public:
  static constexpr std::size_t kUnk = 0;
  static constexpr std::size_t kEos = 1;
  static constexpr std::size_t kSos = 2;
  static constexpr std::size_t kNumSpecials = 3;

  ReducedTargetVocab() = default;
  explicit ReducedTargetVocab(std::vector<std::string> words);

  std::size_t size() const { return words_.size() + kNumSpecials; }
  std::size_t id(std::string_view word) const;  // <UNK> when absent
  bool contains(std::string_view word) const;
  // Surface form of an id; specials map to "<UNK>", "<EOS>", "<SOS>".
  std::string surface(std::size_t id) const;
  const std::vector<std::string>& words() const { return words_; }

  nlohmann::json to_json() const { return words_; }
  static ReducedTargetVocab from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> id_;
};

// Counts only question tokens whose copy label is false; ties broken by first
// occurrence in corpus order.
ReducedTargetVocab build_reduced_target_vocab(std::span<const LabeledExample> corpus,
                                              std::size_t n = 2000);

}  // namespace cgc
