#include "cgc/vocab.hpp"

#include <algorithm>

#include "cgc/errors.hpp"

namespace cgc {

namespace {

// Ranks words by descending count, ties by first occurrence.
std::vector<std::string> rank_by_count(const std::vector<std::string>& first_seen,
                                       const std::unordered_map<std::string, std::size_t>& counts,
                                       std::size_t limit) {
  std::vector<std::size_t> order(first_seen.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return counts.at(first_seen[a]) > counts.at(first_seen[b]);
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < order.size() && out.size() < limit; ++i)
    out.push_back(first_seen[order[i]]);
  return out;
}

}  // namespace

Vocabulary Vocabulary::build(std::span<const AnnotatedExample> corpus, std::size_t max_size) {
  if (corpus.empty()) throw IngestError("cannot build a vocabulary from an empty corpus");
  std::unordered_map<std::string, std::size_t> counts;
  std::vector<std::string> first_seen;
  auto count = [&](std::string_view w) {
    auto key = normalize(w);
    if (counts[key]++ == 0) first_seen.push_back(std::move(key));
  };
  for (const auto& ex : corpus) {
    for (const auto& t : ex.passage) count(t.text);
    for (const auto& q : ex.question) count(q);
  }
  return from_words(rank_by_count(first_seen, counts, max_size));
}

Vocabulary Vocabulary::from_words(std::vector<std::string> ranked_words) {
  Vocabulary v;
  v.words_ = std::move(ranked_words);
  for (std::size_t i = 0; i < v.words_.size(); ++i) {
    if (!v.rank_.emplace(v.words_[i], i + 1).second)
      throw IngestError("duplicate vocabulary word: " + v.words_[i]);
  }
  return v;
}

std::optional<std::size_t> Vocabulary::rank(std::string_view word) const {
  auto it = rank_.find(normalize(word));
  if (it == rank_.end()) return std::nullopt;
  return it->second;
}

std::size_t Vocabulary::id(std::string_view word) const {
  auto r = rank(word);
  return r ? kNumSpecials + *r - 1 : kUnk;
}

Vocabulary Vocabulary::from_json(const nlohmann::json& j) {
  return from_words(j.get<std::vector<std::string>>());
}

const char* tier_name(FrequencyTier t) {
  switch (t) {
    case FrequencyTier::H: return "H";
    case FrequencyTier::M: return "M";
    case FrequencyTier::L: return "L";
  }
  return "?";
}

FrequencyTier tier_of_rank(std::optional<std::size_t> rank, int r_h, int r_l) {
  if (!(r_h > 0 && r_h < r_l))
    throw ConfigError("frequency thresholds must satisfy 0 < r_h < r_l, got r_h=" +
                      std::to_string(r_h) + " r_l=" + std::to_string(r_l));
  if (!rank) return FrequencyTier::L;
  if (*rank <= static_cast<std::size_t>(r_h)) return FrequencyTier::H;
  if (*rank <= static_cast<std::size_t>(r_l)) return FrequencyTier::M;
  return FrequencyTier::L;
}

FrequencyTier tier_of(std::string_view word, const Vocabulary& vocab, int r_h, int r_l) {
  return tier_of_rank(vocab.rank(word), r_h, r_l);
}

ReducedTargetVocab::ReducedTargetVocab(std::vector<std::string> words) : words_(std::move(words)) {
  for (std::size_t i = 0; i < words_.size(); ++i) id_.emplace(words_[i], kNumSpecials + i);
}

std::size_t ReducedTargetVocab::id(std::string_view word) const {
  auto it = id_.find(normalize(word));
  return it == id_.end() ? kUnk : it->second;
}

bool ReducedTargetVocab::contains(std::string_view word) const {
  return id_.count(normalize(word)) != 0;
}

std::string ReducedTargetVocab::surface(std::size_t id) const {
  if (id == kUnk) return "<UNK>";
  if (id == kEos) return "<EOS>";
  if (id == kSos) return "<SOS>";
  return words_.at(id - kNumSpecials);
}

ReducedTargetVocab ReducedTargetVocab::from_json(const nlohmann::json& j) {
  return ReducedTargetVocab(j.get<std::vector<std::string>>());
}

ReducedTargetVocab build_reduced_target_vocab(std::span<const LabeledExample> corpus, std::size_t n) {
  std::unordered_map<std::string, std::size_t> counts;
  std::vector<std::string> first_seen;
  for (const auto& ex : corpus) {
    const auto& q = ex.base.question;
    for (std::size_t t = 0; t < q.size(); ++t) {
      if (ex.question_copy_label.at(t)) continue;
      auto key = normalize(q[t]);
      if (counts[key]++ == 0) first_seen.push_back(std::move(key));
    }
  }
  return ReducedTargetVocab(rank_by_count(first_seen, counts, n));
}

}  // namespace cgc
