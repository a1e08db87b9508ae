#pragma once

// Small hand-built examples and configs shared by the tests.

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "cgc/config.hpp"
#include "cgc/types.hpp"
#include "cgc/vocab.hpp"

namespace cgc::testing {

inline std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// Passage from whitespace-separated text; heads default to a right-branching
// chain rooted at token 0 (head(i) = i-1).
inline AnnotatedExample make_example(const std::string& passage, const std::string& question,
                                     AnswerSpan answer = {0, 0}, std::vector<std::size_t> heads = {},
                                     std::string id = "ex") {
  AnnotatedExample ex;
  ex.id = std::move(id);
  auto toks = words(passage);
  for (std::size_t i = 0; i < toks.size(); ++i) {
    AnnotatedToken t;
    t.text = toks[i];
    t.pos = "NN";
    t.ner = "";
    t.dep = i == 0 ? "ROOT" : "dep";
    t.head = heads.empty() ? (i == 0 ? 0 : i - 1) : heads[i];
    t.is_lower = normalize(t.text) == t.text;
    ex.passage.push_back(std::move(t));
  }
  ex.answer = answer;
  ex.question = words(question);
  return ex;
}

// "Today , Barack Obama gives a speech on democracy in the White House" with
// its reference question. Answer: "Barack Obama".
inline AnnotatedExample speech_example() {
  return make_example("Today , Barack Obama gives a speech on democracy in the White House",
                      "The speech in the White House is given by whom ?", {2, 3},
                      {4, 4, 3, 4, 4, 6, 4, 6, 7, 4, 12, 12, 9}, "speech");
}

// Vocabulary where `filler` made-up words outrank every word in `tail`.
inline Vocabulary padded_vocab(std::size_t filler, const std::vector<std::string>& tail) {
  std::vector<std::string> ranked;
  for (std::size_t i = 0; i < filler; ++i) ranked.push_back("filler" + std::to_string(i));
  for (const auto& w : tail) {
    auto n = normalize(w);
    if (std::find(ranked.begin(), ranked.end(), n) == ranked.end()) ranked.push_back(n);
  }
  return Vocabulary::from_words(ranked);
}

// Tiny model dimensions for gradient checks and fast unit tests.
inline ModelConfig tiny_config() {
  ModelConfig c;
  c.r_h = 2;
  c.r_l = 8;
  c.target_vocab = 12;
  c.word_dim = 4;
  c.tier_dim = 2;
  c.feat_dim = 2;
  c.enc_hidden = 8;
  c.dec_hidden = 8;
  c.readout_dim = 4;
  c.attn_dim = 4;
  c.gcn_layers = 2;
  c.gcn_hidden = 8;
  c.dropout = 0.0;
  c.batch = 2;
  c.epochs = 1;
  c.beam = 3;
  c.max_len = 6;
  c.seed = 3;
  return c;
}

}  // namespace cgc::testing
