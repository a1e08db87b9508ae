#pragma once

#include <span>
#include <vector>

#include "cgc/types.hpp"
#include "cgc/vocab.hpp"

namespace cgc {

struct CopyLabels {
  std::vector<bool> copied;                        // per question token
  std::vector<std::vector<std::size_t>> alignment;  // matching passage positions; empty iff not copied
};

// A question token is copied iff (i) its normalized form occurs in the passage,
// (ii) it is not a stopword, and (iii) its vocabulary rank exceeds r_h (or it
// is out of vocabulary).
CopyLabels label_copy_words(const AnnotatedExample& ex, const Vocabulary& vocab, int r_h);

// A passage token is a clue iff it is not a stopword and its normalized form
// occurs among the question tokens. No rank criterion.
std::vector<bool> label_clue_words(const AnnotatedExample& ex);

std::vector<BioTag> tag_answer_bio(const AnnotatedExample& ex);

// Reduced-vocabulary id per question token (<UNK> when absent), then <EOS>.
std::vector<std::size_t> map_question_targets(const AnnotatedExample& ex,
                                              const ReducedTargetVocab& reduced);

// Everything except question_target_id, which needs the reduced vocabulary
// built from the labeled corpus; see assign_targets().
LabeledExample label_example(const AnnotatedExample& ex, const Vocabulary& vocab, int r_h);
void assign_targets(LabeledExample& ex, const ReducedTargetVocab& reduced);

std::vector<LabeledExample> label_corpus(std::span<const AnnotatedExample> corpus,
                                         const Vocabulary& vocab, int r_h);

}  // namespace cgc
