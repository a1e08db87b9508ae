#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cgc {

// One pre-parsed passage token. head indexes the syntactic head inside the
// passage; the root points to itself.
struct AnnotatedToken {
  std::string text;
  std::string pos;
  std::string ner;  // empty = no entity
  std::string dep;
  std::size_t head = 0;
  bool is_lower = false;
  bool is_digit = false;
  bool like_num = false;

  friend bool operator==(const AnnotatedToken&, const AnnotatedToken&) = default;
};

// Inclusive token range.
struct AnswerSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  bool contains(std::size_t i) const { return i >= start && i <= end; }
  friend bool operator==(const AnswerSpan&, const AnswerSpan&) = default;
};

struct AnnotatedExample {
  std::string id;
  std::vector<AnnotatedToken> passage;
  AnswerSpan answer;
  std::vector<std::string> question;  // may be empty only for generation input

  friend bool operator==(const AnnotatedExample&, const AnnotatedExample&) = default;
};

enum class BioTag { B, I, O };

// An example with the multi-task supervision attached.
struct LabeledExample {
  AnnotatedExample base;
  std::vector<bool> question_copy_label;                 // per question token
  std::vector<std::vector<std::size_t>> copy_alignment;  // per question token; passage positions
  std::vector<std::size_t> question_target_id;           // per question token + trailing <EOS>
  std::vector<bool> passage_clue_label;                  // per passage token
  std::vector<BioTag> answer_bio;                        // per passage token
};

// Lowercased surface form; the single normalization used for counting and matching.
std::string normalize(std::string_view word);

}  // namespace cgc
