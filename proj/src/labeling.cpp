#include "cgc/labeling.hpp"

#include <unordered_map>
#include <unordered_set>

#include "cgc/stopwords.hpp"

namespace cgc {

CopyLabels label_copy_words(const AnnotatedExample& ex, const Vocabulary& vocab, int r_h) {
  std::unordered_map<std::string, std::vector<std::size_t>> positions;
  for (std::size_t i = 0; i < ex.passage.size(); ++i)
    positions[normalize(ex.passage[i].text)].push_back(i);

  CopyLabels out;
  out.copied.assign(ex.question.size(), false);
  out.alignment.resize(ex.question.size());
  for (std::size_t t = 0; t < ex.question.size(); ++t) {
    const auto& w = ex.question[t];
    auto it = positions.find(normalize(w));
    if (it == positions.end() || is_stopword(w)) continue;
    const auto rank = vocab.rank(w);
    if (rank && *rank <= static_cast<std::size_t>(r_h)) continue;
    out.copied[t] = true;
    out.alignment[t] = it->second;
  }
  return out;
}

std::vector<bool> label_clue_words(const AnnotatedExample& ex) {
  std::unordered_set<std::string> question;
  for (const auto& q : ex.question) question.insert(normalize(q));
  std::vector<bool> out(ex.passage.size(), false);
  for (std::size_t i = 0; i < ex.passage.size(); ++i) {
    const auto& w = ex.passage[i].text;
    out[i] = !is_stopword(w) && question.count(normalize(w)) != 0;
  }
  return out;
}

std::vector<BioTag> tag_answer_bio(const AnnotatedExample& ex) {
  std::vector<BioTag> tags(ex.passage.size(), BioTag::O);
  tags.at(ex.answer.start) = BioTag::B;
  for (std::size_t i = ex.answer.start + 1; i <= ex.answer.end; ++i) tags.at(i) = BioTag::I;
  return tags;
}

std::vector<std::size_t> map_question_targets(const AnnotatedExample& ex,
                                              const ReducedTargetVocab& reduced) {
  std::vector<std::size_t> ids;
  ids.reserve(ex.question.size() + 1);
  for (const auto& q : ex.question) ids.push_back(reduced.id(q));
  ids.push_back(ReducedTargetVocab::kEos);
  return ids;
}

LabeledExample label_example(const AnnotatedExample& ex, const Vocabulary& vocab, int r_h) {
  LabeledExample out;
  out.base = ex;
  auto copy = label_copy_words(ex, vocab, r_h);
  out.question_copy_label = std::move(copy.copied);
  out.copy_alignment = std::move(copy.alignment);
  out.passage_clue_label = label_clue_words(ex);
  out.answer_bio = tag_answer_bio(ex);
  return out;
}

void assign_targets(LabeledExample& ex, const ReducedTargetVocab& reduced) {
  ex.question_target_id = map_question_targets(ex.base, reduced);
}

std::vector<LabeledExample> label_corpus(std::span<const AnnotatedExample> corpus,
                                         const Vocabulary& vocab, int r_h) {
  std::vector<LabeledExample> out;
  out.reserve(corpus.size());
  for (const auto& ex : corpus) out.push_back(label_example(ex, vocab, r_h));
  return out;
}

}  // namespace cgc
