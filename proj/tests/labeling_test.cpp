#include <gtest/gtest.h>

#include "cgc/labeling.hpp"
#include "cgc/toy_data.hpp"
#include "fixtures.hpp"
#include "labeling_cases.hpp"

using namespace cgc;
using namespace cgc::testing;

namespace {

std::vector<std::string> copied_words(const AnnotatedExample& ex, const CopyLabels& c) {
  std::vector<std::string> out;
  for (std::size_t t = 0; t < c.copied.size(); ++t)
    if (c.copied[t]) out.push_back(ex.question[t]);
  return out;
}

std::vector<std::string> clue_words(const AnnotatedExample& ex, const std::vector<bool>& clue) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < clue.size(); ++i)
    if (clue[i]) out.push_back(ex.passage[i].text);
  return out;
}

}  // namespace

TEST(CopyLabels, SpeechExample) {
  auto ex = speech_example();
  // speech, White and House sit beyond rank 100
  auto vocab = padded_vocab(150, words("the in a speech white house"));
  auto labels = label_copy_words(ex, vocab, 100);
  EXPECT_EQ(copied_words(ex, labels), (std::vector<std::string>{"speech", "White", "House"}));
  EXPECT_EQ(labels.alignment[1], (std::vector<std::size_t>{6}));
  EXPECT_EQ(labels.alignment[4], (std::vector<std::size_t>{11}));
  EXPECT_TRUE(labels.alignment[0].empty());
}

TEST(ClueLabels, SpeechExample) {
  auto ex = speech_example();
  EXPECT_EQ(clue_words(ex, label_clue_words(ex)), (std::vector<std::string>{"speech", "White", "House"}));
}

TEST(CopyLabels, ZeroOverlap) {
  auto ex = make_example("alpha beta gamma", "delta epsilon ?");
  auto labels = label_copy_words(ex, Vocabulary::from_words({"x"}), 100);
  for (bool b : labels.copied) EXPECT_FALSE(b);
}

TEST(CopyLabels, FrequentOverlapNotCopied) {
  // three sentences; "speech" is the 5th most frequent word, so rank 5 <= r_h
  std::vector<AnnotatedExample> corpus{
      make_example("a speech on a topic", "which speech ?"),
      make_example("the speech on the day", "what speech ?"),
      make_example("her speech on trade", "whose speech ?")};
  auto vocab = Vocabulary::build(corpus);
  ASSERT_LE(*vocab.rank("speech"), 5u);
  auto labels = label_copy_words(corpus[0], vocab, 100);
  EXPECT_FALSE(labels.copied[1]);
  EXPECT_TRUE(label_clue_words(corpus[0])[1]);
  // rank threshold below the word's rank: copied
  EXPECT_TRUE(label_copy_words(corpus[0], vocab, 0).copied[1]);
}

TEST(ClueLabels, OnlyStopwords) {
  auto ex = make_example("it was in the", "was it in the ?");
  for (bool b : label_clue_words(ex)) EXPECT_FALSE(b);
}

TEST(ClueLabels, DuplicatedPassageWord) {
  auto ex = make_example("Nile meets Nile", "which Nile ?");
  EXPECT_EQ(label_clue_words(ex), (std::vector<bool>{true, false, true}));
}

TEST(Bio, Examples) {
  using B = BioTag;
  EXPECT_EQ(tag_answer_bio(make_example("a b c d e", "", {2, 3})), (std::vector<B>{B::O, B::O, B::B, B::I, B::O}));
  EXPECT_EQ(tag_answer_bio(make_example("a b c d e", "", {0, 0})), (std::vector<B>{B::B, B::O, B::O, B::O, B::O}));
  EXPECT_EQ(tag_answer_bio(make_example("a b c d e", "", {0, 4})), (std::vector<B>{B::B, B::I, B::I, B::I, B::I}));
}

TEST(Targets, MapQuestionTargets) {
  ReducedTargetVocab r({"what", "is"});
  auto ex = make_example("p", "what is zyzzyva");
  auto ids = map_question_targets(ex, r);
  ASSERT_EQ(ids.size(), 4u);
  EXPECT_EQ(ids[0], r.id("what"));
  EXPECT_EQ(ids[2], ReducedTargetVocab::kUnk);
  EXPECT_EQ(ids.back(), ReducedTargetVocab::kEos);
}

TEST(Labeling, HandBuiltOracle) {
  auto vocab = case_vocab();
  auto cases = label_cases();
  ASSERT_EQ(cases.size(), 20u);
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& c = cases[k];
    auto ex = make_example(c.passage, c.question);
    auto copy = label_copy_words(ex, vocab, kCaseRh);
    std::vector<bool> want_copy(ex.question.size(), false);
    std::vector<std::vector<std::size_t>> want_align(ex.question.size());
    for (const auto& [t, pos] : c.copied) {
      want_copy.at(t) = true;
      want_align.at(t) = pos;
    }
    std::vector<bool> want_clue(ex.passage.size(), false);
    for (auto i : c.clues) want_clue.at(i) = true;
    EXPECT_EQ(copy.copied, want_copy) << "case " << k << ": " << c.passage;
    EXPECT_EQ(copy.alignment, want_align) << "case " << k;
    EXPECT_EQ(label_clue_words(ex), want_clue) << "case " << k;
  }
}

TEST(Labeling, AlignedPositionsShareSurfaceForm) {
  auto corpus = make_toy_data(40, 5);
  auto vocab = Vocabulary::build(corpus);
  for (const auto& ex : label_corpus(corpus, vocab, 5)) {
    for (std::size_t t = 0; t < ex.base.question.size(); ++t) {
      EXPECT_EQ(ex.question_copy_label[t], !ex.copy_alignment[t].empty());
      for (auto i : ex.copy_alignment[t]) EXPECT_EQ(normalize(ex.base.passage[i].text), normalize(ex.base.question[t]));
    }
  }
}

TEST(Labeling, ClueIffNonStopOverlap) {
  // copy labels add the rank rule; clue labels never depend on it
  auto corpus = make_toy_data(10, 9);
  auto vocab = Vocabulary::build(corpus);
  for (int rh : {1, 5, 50}) {
    for (const auto& ex : label_corpus(corpus, vocab, rh)) {
      EXPECT_EQ(ex.passage_clue_label, label_clue_words(ex.base));
      for (std::size_t t = 0; t < ex.base.question.size(); ++t) {
        if (!ex.question_copy_label[t]) continue;
        for (auto i : ex.copy_alignment[t]) EXPECT_TRUE(ex.passage_clue_label[i]);
      }
    }
  }
}

TEST(Labeling, DeterministicAndIdempotent) {
  auto corpus = make_toy_data(8, 4);
  auto vocab = Vocabulary::build(corpus);
  auto a = label_corpus(corpus, vocab, 5);
  auto b = label_corpus(corpus, vocab, 5);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].question_copy_label, b[i].question_copy_label);
    EXPECT_EQ(a[i].copy_alignment, b[i].copy_alignment);
    EXPECT_EQ(a[i].passage_clue_label, b[i].passage_clue_label);
    // relabeling the labeled base changes nothing
    auto again = label_example(a[i].base, vocab, 5);
    EXPECT_EQ(again.question_copy_label, a[i].question_copy_label);
  }
}

TEST(ToyData, EveryExampleHasAClue) {
  for (const auto& ex : make_toy_data(64, 11)) {
    auto clue = label_clue_words(ex);
    EXPECT_NE(std::count(clue.begin(), clue.end(), true), 0) << ex.id;
  }
}
